//! JSON interchange for the parsed AST.
//!
//! The document layout is fixed by `schema/ast.schema.json` (shipped with
//! this crate): chunk parts are a tagged union on `"kind"` with variants
//! `literal`, `block`, `prolongation`, and `group`. Import re-checks every
//! structural invariant, so a hand-edited document with, say, a stored mark
//! offset that contradicts its position is rejected rather than silently
//! repaired.

use super::{
    Chunk, EventCode, Fragment, InvariantViolation, MarkKind, Part, PointMark, Segment, Separator,
    Transcript,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AstError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid transcript structure in segment {segment}: {violation}")]
    Invalid {
        segment: usize,
        violation: InvariantViolation,
    },
}

#[derive(Serialize, Deserialize)]
struct WireTranscript {
    #[serde(default)]
    source_name: Option<String>,
    segments: Vec<WireSegment>,
}

#[derive(Serialize, Deserialize)]
struct WireSegment {
    #[serde(default)]
    speaker: Option<String>,
    #[serde(default)]
    time_range: Option<(f64, f64)>,
    chunks: Vec<WireChunk>,
}

#[derive(Serialize, Deserialize)]
struct WireChunk {
    #[serde(default)]
    sensitive: bool,
    parts: Vec<WirePart>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum WirePart {
    Literal {
        text: String,
    },
    Block {
        offset: usize,
    },
    Prolongation {
        offset: usize,
    },
    Group {
        fragments: Vec<WireFragment>,
        codes: Vec<EventCode>,
        attached: bool,
    },
}

#[derive(Serialize, Deserialize)]
struct WireFragment {
    text: String,
    #[serde(default)]
    prolongation_offsets: Vec<usize>,
    separator: WireSeparator,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum WireSeparator {
    Hyphen,
    Space,
    None,
}

impl From<Separator> for WireSeparator {
    fn from(sep: Separator) -> Self {
        match sep {
            Separator::Hyphen => WireSeparator::Hyphen,
            Separator::Space => WireSeparator::Space,
            Separator::None => WireSeparator::None,
        }
    }
}

impl From<WireSeparator> for Separator {
    fn from(sep: WireSeparator) -> Self {
        match sep {
            WireSeparator::Hyphen => Separator::Hyphen,
            WireSeparator::Space => Separator::Space,
            WireSeparator::None => Separator::None,
        }
    }
}

fn encode(transcript: &Transcript) -> WireTranscript {
    WireTranscript {
        source_name: transcript.source_name.clone(),
        segments: transcript
            .segments
            .iter()
            .map(|seg| WireSegment {
                speaker: seg.speaker.clone(),
                time_range: seg.time_range,
                chunks: seg
                    .chunks
                    .iter()
                    .map(|chunk| WireChunk {
                        sensitive: chunk.sensitive,
                        parts: chunk.parts.iter().map(encode_part).collect(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

fn encode_part(part: &Part) -> WirePart {
    match part {
        Part::Literal(text) => WirePart::Literal { text: text.clone() },
        Part::Mark(mark) => match mark.kind {
            MarkKind::Block => WirePart::Block {
                offset: mark.offset,
            },
            MarkKind::Prolongation => WirePart::Prolongation {
                offset: mark.offset,
            },
        },
        Part::Group(group) => WirePart::Group {
            fragments: group
                .fragments
                .iter()
                .map(|f| WireFragment {
                    text: f.text.clone(),
                    prolongation_offsets: f.prolongation_offsets.clone(),
                    separator: f.trailing_separator.into(),
                })
                .collect(),
            codes: group.codes.clone(),
            attached: group.attached,
        },
    }
}

fn decode_part(part: WirePart) -> Part {
    match part {
        WirePart::Literal { text } => Part::Literal(text),
        WirePart::Block { offset } => Part::Mark(PointMark {
            kind: MarkKind::Block,
            offset,
        }),
        WirePart::Prolongation { offset } => Part::Mark(PointMark {
            kind: MarkKind::Prolongation,
            offset,
        }),
        WirePart::Group {
            fragments,
            codes,
            attached,
        } => Part::Group(super::BracketGroup {
            fragments: fragments
                .into_iter()
                .map(|f| Fragment {
                    text: f.text,
                    prolongation_offsets: f.prolongation_offsets,
                    trailing_separator: f.separator.into(),
                })
                .collect(),
            codes,
            attached,
        }),
    }
}

/// Serializes a transcript to the published JSON AST form (compact).
pub fn to_json(transcript: &Transcript) -> String {
    serde_json::to_string(&encode(transcript)).expect("AST serialization cannot fail")
}

/// As [`to_json`], pretty-printed.
pub fn to_json_pretty(transcript: &Transcript) -> String {
    serde_json::to_string_pretty(&encode(transcript)).expect("AST serialization cannot fail")
}

/// Parses the JSON AST form back into a validated [`Transcript`].
pub fn from_json(json: &str) -> Result<Transcript, AstError> {
    let wire: WireTranscript = serde_json::from_str(json)?;
    let mut segments = Vec::with_capacity(wire.segments.len());
    for (seg_idx, wire_seg) in wire.segments.into_iter().enumerate() {
        let chunks = wire_seg
            .chunks
            .into_iter()
            .map(|wc| Chunk {
                sensitive: wc.sensitive,
                parts: wc.parts.into_iter().map(decode_part).collect(),
            })
            .collect();
        let segment = Segment {
            chunks,
            time_range: wire_seg.time_range,
            speaker: wire_seg.speaker,
        };
        segment.check().map_err(|violation| AstError::Invalid {
            segment: seg_idx,
            violation,
        })?;
        segments.push(segment);
    }
    Ok(Transcript {
        segments,
        source_name: wire.source_name,
    })
}
