//! Chunk-level diff of two annotations of the same audio.
//!
//! The semantic token alignment anchors the comparison; wherever the
//! aligned chunks' canonical markup differs, or material exists on one
//! side only (a bracketed repetition that vanishes semantically, say),
//! one entry reports both renderings and the symmetric difference of the
//! event codes involved.

use super::align::{align_tokens, semantic_tokens};
use crate::grammar::{chunk_markup, serialize, Chunk, EventCode, Transcript};
use crate::transforms::{extract_events, semantic_chunk};
use serde::Serialize;
use std::collections::BTreeSet;

/// One aligned position where the two annotations disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffEntry {
    /// Index into the token alignment where the disagreement begins.
    pub position: usize,
    /// Markup of the chunks involved on the first side, space-joined.
    pub a_markup: String,
    /// Markup of the chunks involved on the second side, space-joined.
    pub b_markup: String,
    /// Symmetric difference of the event codes present on the two sides.
    pub codes: Vec<EventCode>,
}

/// All disagreements between two annotations. Empty exactly when the two
/// transcripts have identical canonical serializations.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct DiffReport {
    pub entries: Vec<DiffEntry>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A transcript's chunks flattened across segments, with everything the
/// diff needs precomputed.
struct FlatChunk {
    markup: String,
    token_count: usize,
    codes: BTreeSet<EventCode>,
}

fn flatten(transcript: &Transcript) -> Vec<FlatChunk> {
    let mut code_sets: Vec<BTreeSet<EventCode>> = Vec::new();
    let mut chunk_of: Vec<(usize, usize)> = Vec::new();
    for (seg_idx, segment) in transcript.segments.iter().enumerate() {
        for chunk_idx in 0..segment.chunks.len() {
            chunk_of.push((seg_idx, chunk_idx));
            code_sets.push(BTreeSet::new());
        }
    }
    for event in extract_events(transcript) {
        let flat = chunk_of
            .iter()
            .position(|&(s, c)| (s, c) == (event.segment_index, event.chunk_index))
            .expect("event points at an existing chunk");
        code_sets[flat].insert(event.code);
    }
    let mut flats = Vec::new();
    let mut i = 0;
    for segment in &transcript.segments {
        for chunk in &segment.chunks {
            flats.push(FlatChunk {
                markup: chunk_markup(chunk),
                token_count: token_count(chunk),
                codes: std::mem::take(&mut code_sets[i]),
            });
            i += 1;
        }
    }
    flats
}

fn token_count(chunk: &Chunk) -> usize {
    semantic_chunk(chunk).split_whitespace().count()
}

#[derive(Default)]
struct Region {
    position: Option<usize>,
    a: Vec<usize>,
    b: Vec<usize>,
}

impl Region {
    fn is_empty(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    fn flush(&mut self, a: &[FlatChunk], b: &[FlatChunk], entries: &mut Vec<DiffEntry>) {
        if self.is_empty() {
            return;
        }
        let a_markup = join_markup(&self.a, a);
        let b_markup = join_markup(&self.b, b);
        // tokenless chunks collect into regions even when both sides carry
        // the same material; only actual markup differences are reported
        if a_markup == b_markup {
            *self = Region::default();
            return;
        }
        let a_codes: BTreeSet<EventCode> =
            self.a.iter().flat_map(|&i| a[i].codes.clone()).collect();
        let b_codes: BTreeSet<EventCode> =
            self.b.iter().flat_map(|&i| b[i].codes.clone()).collect();
        let codes: Vec<EventCode> = a_codes.symmetric_difference(&b_codes).copied().collect();
        entries.push(DiffEntry {
            position: self.position.unwrap_or(0),
            a_markup,
            b_markup,
            codes,
        });
        *self = Region::default();
    }
}

fn join_markup(indices: &[usize], chunks: &[FlatChunk]) -> String {
    indices
        .iter()
        .map(|&i| chunks[i].markup.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Diffs two annotations of the same audio.
pub fn diff(a: &Transcript, b: &Transcript) -> DiffReport {
    let flat_a = flatten(a);
    let flat_b = flatten(b);
    let tokens_a = semantic_tokens(a);
    let tokens_b = semantic_tokens(b);

    // owner chunk of each token, and per-chunk first-token index
    let owner_a = token_owners(&flat_a);
    let owner_b = token_owners(&flat_b);

    let alignment = align_tokens(&tokens_a, &tokens_b);

    let mut entries = Vec::new();
    let mut region = Region::default();
    // next not-yet-consumed chunk per side
    let mut next_a = 0usize;
    let mut next_b = 0usize;

    for (pos, &(ta, tb)) in alignment.pairs.iter().enumerate() {
        let ca = ta.map(|t| owner_a[t]);
        let cb = tb.map(|t| owner_b[t]);
        let tokens_equal = match (ta, tb) {
            (Some(x), Some(y)) => tokens_a[x].to_lowercase() == tokens_b[y].to_lowercase(),
            _ => false,
        };
        let clean_candidate = match (ca, cb) {
            (Some(ca), Some(cb)) => tokens_equal && flat_a[ca].markup == flat_b[cb].markup,
            _ => false,
        };
        if clean_candidate {
            let (ca, cb) = (ca.unwrap(), cb.unwrap());
            // tokenless chunks pending before the clean pair join any open
            // region, and a clean anchor always closes the region
            if next_a < ca || next_b < cb {
                if region.is_empty() {
                    region.position = Some(pos);
                }
                while next_a < ca {
                    region.a.push(next_a);
                    next_a += 1;
                }
                while next_b < cb {
                    region.b.push(next_b);
                    next_b += 1;
                }
            }
            region.flush(&flat_a, &flat_b, &mut entries);
            // consume the matching chunks once their last token passes
            if last_token_of_chunk(&flat_a, ca) == ta.unwrap() {
                next_a = ca + 1;
            }
            if last_token_of_chunk(&flat_b, cb) == tb.unwrap() {
                next_b = cb + 1;
            }
        } else {
            if region.is_empty() {
                region.position = Some(pos);
            }
            if let Some(ca) = ca {
                while next_a <= ca {
                    region.a.push(next_a);
                    next_a += 1;
                }
            }
            if let Some(cb) = cb {
                while next_b <= cb {
                    region.b.push(next_b);
                    next_b += 1;
                }
            }
        }
    }
    // trailing tokenless chunks
    if next_a < flat_a.len() || next_b < flat_b.len() {
        if region.is_empty() {
            region.position = Some(alignment.pairs.len());
        }
        while next_a < flat_a.len() {
            region.a.push(next_a);
            next_a += 1;
        }
        while next_b < flat_b.len() {
            region.b.push(next_b);
            next_b += 1;
        }
    }
    region.flush(&flat_a, &flat_b, &mut entries);

    // Segment structure or speaker labels can differ without any chunk-level
    // disagreement; pin the report to canonical-serialization equality.
    if entries.is_empty() && serialize(a) != serialize(b) {
        entries.push(DiffEntry {
            position: 0,
            a_markup: serialize(a),
            b_markup: serialize(b),
            codes: Vec::new(),
        });
    }

    DiffReport { entries }
}

fn token_owners(chunks: &[FlatChunk]) -> Vec<usize> {
    let mut owners = Vec::new();
    for (idx, chunk) in chunks.iter().enumerate() {
        for _ in 0..chunk.token_count {
            owners.push(idx);
        }
    }
    owners
}

fn last_token_of_chunk(chunks: &[FlatChunk], chunk_idx: usize) -> usize {
    let before: usize = chunks[..chunk_idx].iter().map(|c| c.token_count).sum();
    before + chunks[chunk_idx].token_count - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{parse, ParseOptions};

    fn t(s: &str) -> Transcript {
        parse(s, &ParseOptions::default())
            .expect("parse")
            .transcript
    }

    fn codes(entry: &DiffEntry) -> Vec<EventCode> {
        entry.codes.clone()
    }

    #[test]
    fn identical_transcripts_have_empty_diff() {
        let a = t("[A-a-]/s[add]/radd more words");
        assert!(diff(&a, &a).is_empty());
    }

    #[test]
    fn capitalization_and_extra_word_label() {
        let report = diff(&t("[A-A-]/sAdd"), &t("[A-a-]/s[add]/radd"));
        assert_eq!(report.entries.len(), 1);
        assert_eq!(codes(&report.entries[0]), vec![EventCode::WordRepetition]);
        assert_eq!(report.entries[0].a_markup, "[A-A-]/sAdd");
        assert_eq!(report.entries[0].b_markup, "[A-a-]/s[add]/radd");
    }

    #[test]
    fn embodied_vs_acoustic_labels() {
        let report = diff(&t("sh/bopping"), &t("[sh/p]/s shopping"));
        assert_eq!(report.entries.len(), 1);
        assert_eq!(
            codes(&report.entries[0]),
            vec![
                EventCode::Block,
                EventCode::Prolongation,
                EventCode::SoundRepetition
            ]
        );
    }

    #[test]
    fn prolongation_only_difference() {
        let report = diff(&t("w/porking"), &t("working"));
        assert_eq!(report.entries.len(), 1);
        assert_eq!(codes(&report.entries[0]), vec![EventCode::Prolongation]);
    }

    #[test]
    fn prolongation_vs_sound_repetition() {
        let report = diff(&t("fro/pm"), &t("fr[o-o-o-o-]/som"));
        assert_eq!(report.entries.len(), 1);
        assert_eq!(
            codes(&report.entries[0]),
            vec![EventCode::Prolongation, EventCode::SoundRepetition]
        );
    }

    #[test]
    fn backtracking_example_is_one_region() {
        let report = diff(&t("[how]/r H/p/bow"), &t("H/b How"));
        assert_eq!(report.entries.len(), 1);
        assert_eq!(
            codes(&report.entries[0]),
            vec![EventCode::Prolongation, EventCode::WordRepetition]
        );
        assert_eq!(report.entries[0].a_markup, "[how]/r H/p/bow");
        assert_eq!(report.entries[0].b_markup, "H/b How");
    }

    #[test]
    fn interjection_on_one_side_only() {
        let report = diff(&t("x [uh]/i y"), &t("x y"));
        assert_eq!(report.entries.len(), 1);
        assert_eq!(report.entries[0].a_markup, "[uh]/i");
        assert_eq!(report.entries[0].b_markup, "");
        assert_eq!(codes(&report.entries[0]), vec![EventCode::Interjection]);
    }

    #[test]
    fn segment_structure_difference_is_reported() {
        let report = diff(&t("a b"), &t("a\nb"));
        assert_eq!(report.entries.len(), 1);
        assert!(report.entries[0].codes.is_empty());
    }

    #[test]
    fn empty_iff_equal_serialization() {
        let pairs = [
            ("a b c", "a b c"),
            ("a b", "a c"),
            ("spk\ta", "a"),
            ("[m-]/sm", "m"),
        ];
        for (sa, sb) in pairs {
            let (a, b) = (t(sa), t(sb));
            let expected_empty = serialize(&a) == serialize(&b);
            assert_eq!(diff(&a, &b).is_empty(), expected_empty, "{sa:?} vs {sb:?}");
        }
    }
}
