//! Deriving plain-text renderings, event lists, clip-level labels, and
//! redacted transcripts from a parsed [`Transcript`].
//!
//! Two renderings matter downstream:
//!
//! * **verbatim**: strip only the notation (`/x` codes, brackets, angle
//!   marks); every spoken repetition survives, with fragment separators
//!   kept: `[pr-pr-pr-]/sprepare` → `pr-pr-pr-prepare`.
//! * **semantic**: additionally delete all bracketed content, leaving the
//!   intended words: `[pr-pr-pr-]/sprepare` → `prepare`.
//!
//! The semantic rendering is always a character subsequence of the verbatim
//! one, and neither contains any markup.

use crate::grammar::{Chunk, EventCode, Part, Segment, Transcript};
use serde::Serialize;

/// One extracted stuttering event.
///
/// `char_span` is a half-open character range in the verbatim rendering of
/// the segment; point marks get zero-width spans at their anchor.
/// `repetition_count` is the fragment count for group codes and 1 for
/// point marks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EventInstance {
    pub code: EventCode,
    pub segment_index: usize,
    pub chunk_index: usize,
    pub char_span: (usize, usize),
    pub repetition_count: usize,
}

/// Per-segment presence flags, one per event code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClipLabels {
    pub segment_index: usize,
    pub block: bool,
    pub prolongation: bool,
    pub sound_repetition: bool,
    pub word_repetition: bool,
    pub interjection: bool,
}

impl ClipLabels {
    pub fn empty(segment_index: usize) -> ClipLabels {
        ClipLabels {
            segment_index,
            block: false,
            prolongation: false,
            sound_repetition: false,
            word_repetition: false,
            interjection: false,
        }
    }

    pub fn get(&self, code: EventCode) -> bool {
        match code {
            EventCode::Block => self.block,
            EventCode::Prolongation => self.prolongation,
            EventCode::SoundRepetition => self.sound_repetition,
            EventCode::WordRepetition => self.word_repetition,
            EventCode::Interjection => self.interjection,
        }
    }

    pub fn set(&mut self, code: EventCode, value: bool) {
        match code {
            EventCode::Block => self.block = value,
            EventCode::Prolongation => self.prolongation = value,
            EventCode::SoundRepetition => self.sound_repetition = value,
            EventCode::WordRepetition => self.word_repetition = value,
            EventCode::Interjection => self.interjection = value,
        }
    }
}

/// How sensitive chunks are rewritten by [`redact`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedactionPolicy {
    mode: RedactionMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum RedactionMode {
    Placeholder(String),
    Hash,
    Drop,
}

impl RedactionPolicy {
    /// Replace sensitive text with a fixed token. The token must not
    /// contain markup characters, tabs, or newlines.
    pub fn placeholder(
        token: impl Into<String>,
    ) -> Result<RedactionPolicy, crate::grammar::InvariantViolation> {
        let token = token.into();
        crate::grammar::check_literal_text(&token, true)
            .map_err(|_| crate::grammar::InvariantViolation::BadPlaceholder)?;
        Ok(RedactionPolicy {
            mode: RedactionMode::Placeholder(token),
        })
    }

    /// Replace sensitive text with a stable 8-hex-character content digest,
    /// so equal originals redact equally across runs.
    pub fn hash() -> RedactionPolicy {
        RedactionPolicy {
            mode: RedactionMode::Hash,
        }
    }

    /// Remove sensitive chunks entirely.
    pub fn drop_chunk() -> RedactionPolicy {
        RedactionPolicy {
            mode: RedactionMode::Drop,
        }
    }
}

/// Verbatim rendering, one string per segment.
pub fn to_verbatim(transcript: &Transcript) -> Vec<String> {
    transcript
        .segments
        .iter()
        .map(|seg| render_verbatim(seg).text)
        .collect()
}

/// Semantic rendering, one string per segment: bracketed content and all
/// marks deleted, surviving chunks joined by single spaces.
pub fn to_semantic(transcript: &Transcript) -> Vec<String> {
    transcript.segments.iter().map(semantic_segment).collect()
}

pub(crate) fn semantic_segment(segment: &Segment) -> String {
    let mut out = String::new();
    for chunk in &segment.chunks {
        let text = semantic_chunk(chunk);
        if text.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&text);
    }
    out
}

pub(crate) fn semantic_chunk(chunk: &Chunk) -> String {
    chunk.literal_text()
}

/// All event instances in document order.
pub fn extract_events(transcript: &Transcript) -> Vec<EventInstance> {
    let mut events = Vec::new();
    for (seg_idx, segment) in transcript.segments.iter().enumerate() {
        let rendered = render_verbatim(segment);
        for mut event in rendered.events {
            event.segment_index = seg_idx;
            events.push(event);
        }
    }
    events
}

/// Presence flags per segment, derived from [`extract_events`].
pub fn clip_labels(transcript: &Transcript) -> Vec<ClipLabels> {
    let mut labels: Vec<ClipLabels> = (0..transcript.segments.len())
        .map(ClipLabels::empty)
        .collect();
    for event in extract_events(transcript) {
        labels[event.segment_index].set(event.code, true);
    }
    labels
}

/// Rewrites sensitive chunks according to `policy`; everything else is
/// untouched. With the placeholder and hash policies the returned
/// transcript renders without any trace of the original sensitive text;
/// with the drop policy the chunks are gone altogether.
pub fn redact(transcript: &Transcript, policy: &RedactionPolicy) -> Transcript {
    let segments = transcript
        .segments
        .iter()
        .map(|segment| {
            let chunks = segment
                .chunks
                .iter()
                .filter_map(|chunk| {
                    if !chunk.sensitive {
                        return Some(chunk.clone());
                    }
                    let replacement = match &policy.mode {
                        RedactionMode::Placeholder(token) => token.clone(),
                        RedactionMode::Hash => fnv1a_hex8(&chunk.literal_text()),
                        RedactionMode::Drop => return None,
                    };
                    Some(Chunk {
                        parts: vec![Part::Literal(replacement)],
                        sensitive: true,
                    })
                })
                .collect();
            Segment {
                chunks,
                time_range: segment.time_range,
                speaker: segment.speaker.clone(),
            }
        })
        .collect();
    Transcript {
        segments,
        source_name: transcript.source_name.clone(),
    }
}

/// Event list as CSV with a header row: segment, code, start, end, count.
pub fn events_to_csv(events: &[EventInstance]) -> String {
    let mut out = String::from("segment,code,start,end,count\n");
    for e in events {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.segment_index,
            e.code.name(),
            e.char_span.0,
            e.char_span.1,
            e.repetition_count
        ));
    }
    out
}

/// Event list as JSON lines, one object per event.
pub fn events_to_jsonl(events: &[EventInstance]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&serde_json::to_string(e).expect("event serialization cannot fail"));
        out.push('\n');
    }
    out
}

struct RenderedSegment {
    text: String,
    events: Vec<EventInstance>,
}

/// Walks a segment once, producing the verbatim text and every event with
/// its span in that text. Chunks whose rendering is empty (bare point
/// marks) contribute no text; their events anchor at the current position.
fn render_verbatim(segment: &Segment) -> RenderedSegment {
    let mut text = String::new();
    let mut len = 0usize;
    let mut events = Vec::new();
    for (chunk_idx, chunk) in segment.chunks.iter().enumerate() {
        let mut rendered = String::new();
        let mut rlen = 0usize;
        let mut chunk_events: Vec<(EventCode, usize, usize, usize)> = Vec::new();
        for part in &chunk.parts {
            match part {
                Part::Literal(t) => {
                    rendered.push_str(t);
                    rlen += t.chars().count();
                }
                Part::Mark(mark) => {
                    chunk_events.push((mark.kind.code(), rlen, rlen, 1));
                }
                Part::Group(group) => {
                    let group_start = rlen;
                    let mut frag_events = Vec::new();
                    for fragment in &group.fragments {
                        let frag_start = rlen;
                        rendered.push_str(&fragment.text);
                        rlen += fragment.text.chars().count();
                        for &off in &fragment.prolongation_offsets {
                            frag_events.push((
                                EventCode::Prolongation,
                                frag_start + off,
                                frag_start + off,
                                1,
                            ));
                        }
                        rendered.push_str(fragment.trailing_separator.as_str());
                        rlen += fragment.trailing_separator.as_str().chars().count();
                    }
                    for &code in &group.codes {
                        chunk_events.push((code, group_start, rlen, group.fragments.len()));
                    }
                    chunk_events.extend(frag_events);
                }
            }
        }
        let joiner = if !text.is_empty() && !rendered.is_empty() {
            text.push(' ');
            1
        } else {
            0
        };
        let base = len + joiner;
        for (code, start, end, count) in chunk_events {
            events.push(EventInstance {
                code,
                segment_index: 0, // filled by the caller
                chunk_index: chunk_idx,
                char_span: (base + start, base + end),
                repetition_count: count,
            });
        }
        text.push_str(&rendered);
        len = base + rlen;
    }
    RenderedSegment { text, events }
}

fn fnv1a_hex8(text: &str) -> String {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = OFFSET;
    for byte in text.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(PRIME);
    }
    format!("{hash:016x}")[..8].to_string()
}
