//! Lint rules over parsed transcripts.
//!
//! Rules are individually toggleable through [`RuleSet`]. Unknown rule ids
//! are rejected when the set is built, so `validate` itself never fails.
//! Diagnostic spans refer to the canonical serialization of each segment
//! (identical to the input for single-spaced source text).
//!
//! | id   | default | finding |
//! |------|---------|---------|
//! | W001 | on | whole-word repetition labeled `/s`; `/r` is the expected label for repeated short words |
//! | W002 | on | Arabic digits in literal text; numbers are transcribed as English words |
//! | W003 | on | `@` or URL fragments in literal text; addresses are transcribed by sound |
//! | W004 | on | sound-repetition group with space separators or a missing trailing hyphen |
//! | W005 | on | sound-repetition group detached from its host word |
//! | W006 | on | block mark dangling at the end of a segment |
//! | I001 | off | per-transcript listening reminders (informational) |

use super::serialize::segment_layout;
use super::{Chunk, EventCode, MarkKind, Part, Segment, Transcript};
use crate::diagnostics::{Diagnostic, Severity};
use std::collections::BTreeSet;
use thiserror::Error;

struct RuleInfo {
    id: &'static str,
    default_on: bool,
    summary: &'static str,
    explanation: &'static str,
}

const RULES: &[RuleInfo] = &[
    RuleInfo {
        id: "W001",
        default_on: true,
        summary: "whole-word repetition labeled as sound repetition",
        explanation: "Repetitions of a short, single-syllable word are often impossible to tell \
apart from repetitions of its first sound. To keep annotations consistent across annotators, \
repeated whole words take the word-repetition label /r; the sound-repetition label /s is \
reserved for clearly partial sounds. This rule fires when every fragment of an /s group equals \
the following word (ignoring case) and no /r label is present, e.g. `[add add]/s add`. \
Fix: relabel the group /r, or keep /s and shorten the fragments to the repeated sound.",
    },
    RuleInfo {
        id: "W002",
        default_on: true,
        summary: "Arabic digits in literal text",
        explanation: "Numbers are transcribed as the English words the speaker said, not as \
digits: `two thirty`, not `2:30` or `2 thirty`. Digits hide how the number was actually \
voiced, which matters for verbatim transcripts. Fix: spell the number out as spoken.",
    },
    RuleInfo {
        id: "W003",
        default_on: true,
        summary: "symbol or URL notation in literal text",
        explanation: "Email addresses, URLs, and similar symbols are transcribed by sound: \
`info at university dot org`, not `info@university.org`. This rule flags `@`, `://`, and \
`www.` in literal text. Fix: write each symbol the way it was spoken.",
    },
    RuleInfo {
        id: "W004",
        default_on: true,
        summary: "noncanonical separators in a sound-repetition group",
        explanation: "Sound-repetition fragments are hyphen-separated with a trailing hyphen \
after each fragment, e.g. `[pr-pr-pr-]/sprepare`; the trailing hyphen keeps the verbatim \
rendering (`pr-pr-pr-prepare`) readable. A space separator or a missing trailing hyphen \
still parses, but downstream renderings will join fragments differently than intended. \
Fix: separate fragments with `-` and end the last fragment with `-`.",
    },
    RuleInfo {
        id: "W005",
        default_on: true,
        summary: "detached sound-repetition group",
        explanation: "A sound-repetition group belongs directly in front of its host word with \
no space: `[pr-pr-pr-]/sprepare`. Detaching it (`[sh]/s shopping`) leaves the repeated sound \
floating, so semantic extraction cannot tell which word it belongs to. Fix: remove the space \
between `]/s` and the word.",
    },
    RuleInfo {
        id: "W006",
        default_on: true,
        summary: "dangling block at segment end",
        explanation: "A block mark normally sits before the sound it interrupts. A `/b` at the \
very end of a segment describes a block with no following attempt. That can \
produce no sound at all), but worth double-checking against the recording: the blocked word \
may have been cut off by segmentation. This is accepted with a warning.",
    },
    RuleInfo {
        id: "I001",
        default_on: false,
        summary: "listening reminders",
        explanation: "Reminders, not rules: what you hear and the underlying event can differ.\n\
  1. Non-verbal breathing sounds at the edges of a sentence often betray small blocks.\n\
  2. An intentional restart after getting stuck is a block, not a repetition; involuntary \
repetition is rapid, a restart is deliberate.\n\
  3. Continuous airflow points to a prolongation; choppy or stopped airflow points to a block.\n\
These cannot be checked mechanically; this note exists so batch reports keep them in view.",
    },
];

fn rule_info(id: &str) -> Option<&'static RuleInfo> {
    RULES.iter().find(|r| r.id == id)
}

/// All known rule ids, in catalog order.
pub fn rule_ids() -> Vec<&'static str> {
    RULES.iter().map(|r| r.id).collect()
}

/// One-line description of a rule, if the id is known.
pub fn rule_summary(id: &str) -> Option<&'static str> {
    rule_info(id).map(|r| r.summary)
}

/// Full explanatory text behind a rule, if the id is known.
pub fn rule_explanation(id: &str) -> Option<&'static str> {
    rule_info(id).map(|r| r.explanation)
}

/// Raised when a rule id is not in the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule id {0:?}")]
pub struct UnknownRuleId(pub String);

/// The set of enabled lint rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    enabled: BTreeSet<&'static str>,
}

impl RuleSet {
    /// W001–W006 on, I001 off.
    pub fn default_rules() -> RuleSet {
        RuleSet {
            enabled: RULES
                .iter()
                .filter(|r| r.default_on)
                .map(|r| r.id)
                .collect(),
        }
    }

    pub fn empty() -> RuleSet {
        RuleSet {
            enabled: BTreeSet::new(),
        }
    }

    pub fn enable(&mut self, id: &str) -> Result<(), UnknownRuleId> {
        let info = rule_info(id).ok_or_else(|| UnknownRuleId(id.to_string()))?;
        self.enabled.insert(info.id);
        Ok(())
    }

    pub fn disable(&mut self, id: &str) -> Result<(), UnknownRuleId> {
        let info = rule_info(id).ok_or_else(|| UnknownRuleId(id.to_string()))?;
        self.enabled.remove(info.id);
        Ok(())
    }

    pub fn is_enabled(&self, id: &str) -> bool {
        self.enabled.contains(id)
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::default_rules()
    }
}

/// Runs every enabled rule over the transcript and returns the findings in
/// (segment, span) order. Never mutates the transcript.
pub fn validate(transcript: &Transcript, rules: &RuleSet) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for (seg_idx, segment) in transcript.segments.iter().enumerate() {
        check_segment(seg_idx, segment, rules, &mut diags);
    }
    if rules.is_enabled("I001") && !transcript.segments.is_empty() {
        diags.push(Diagnostic::new(
            Severity::Info,
            "I001",
            rule_explanation("I001").expect("catalog entry"),
            0,
            (0, 0),
        ));
    }
    diags.sort_by_key(|d| (d.location.segment, d.location.span, d.rule_id.clone()));
    diags
}

fn check_segment(seg_idx: usize, segment: &Segment, rules: &RuleSet, diags: &mut Vec<Diagnostic>) {
    let (text, chunk_spans) = segment_layout(segment);
    let chars: Vec<char> = text.chars().collect();

    if rules.is_enabled("W002") {
        scan_digit_runs(&chars, seg_idx, diags);
    }
    if rules.is_enabled("W003") {
        scan_symbols(&chars, seg_idx, diags);
    }

    for (chunk_idx, chunk) in segment.chunks.iter().enumerate() {
        let span = chunk_spans[chunk_idx];
        for (part_idx, part) in chunk.parts.iter().enumerate() {
            let Some(group) = part.as_group() else {
                continue;
            };
            let is_sound = group.has_code(EventCode::SoundRepetition);
            if is_sound && rules.is_enabled("W004") {
                check_sound_separators(group, seg_idx, span, diags);
            }
            if is_sound && !group.attached && rules.is_enabled("W005") {
                diags.push(Diagnostic::new(
                    Severity::Warning,
                    "W005",
                    "sound-repetition group is detached from its host word",
                    seg_idx,
                    span,
                ));
            }
            if is_sound && rules.is_enabled("W001") {
                check_whole_word_repetition(
                    segment, chunk_idx, part_idx, chunk, group, seg_idx, span, diags,
                );
            }
        }
    }

    if rules.is_enabled("W006") {
        if let Some(chunk) = segment.chunks.last() {
            if !chunk.sensitive && ends_with_dangling_block(chunk) {
                let span = *chunk_spans.last().expect("span per chunk");
                diags.push(Diagnostic::new(
                    Severity::Warning,
                    "W006",
                    "block mark dangles at the end of the segment",
                    seg_idx,
                    (span.1.saturating_sub(2), span.1),
                ));
            }
        }
    }
}

fn ends_with_dangling_block(chunk: &Chunk) -> bool {
    match chunk.parts.last() {
        Some(Part::Mark(mark)) => mark.kind == MarkKind::Block,
        _ => false,
    }
}

fn scan_digit_runs(chars: &[char], seg_idx: usize, diags: &mut Vec<Diagnostic>) {
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let run: String = chars[start..i].iter().collect();
            diags.push(Diagnostic::new(
                Severity::Warning,
                "W002",
                format!("digit {run:?} in transcript; spell numbers out as spoken"),
                seg_idx,
                (start, i),
            ));
        } else {
            i += 1;
        }
    }
}

fn scan_symbols(chars: &[char], seg_idx: usize, diags: &mut Vec<Diagnostic>) {
    for (i, &ch) in chars.iter().enumerate() {
        if ch == '@' {
            diags.push(Diagnostic::new(
                Severity::Warning,
                "W003",
                "`@` in transcript; transcribe symbols by sound (\"at\")",
                seg_idx,
                (i, i + 1),
            ));
        }
    }
    // `/` is reserved markup, so full URLs cannot occur; catch the
    // schemeless spellings that can.
    for needle in ["www.", ".com", ".org", ".net"] {
        let needle_chars: Vec<char> = needle.chars().collect();
        let mut i = 0;
        while i + needle_chars.len() <= chars.len() {
            let window = &chars[i..i + needle_chars.len()];
            let matches = window
                .iter()
                .zip(&needle_chars)
                .all(|(a, b)| a.eq_ignore_ascii_case(b));
            if matches {
                diags.push(Diagnostic::new(
                    Severity::Warning,
                    "W003",
                    format!("{needle:?} in transcript; transcribe addresses by sound"),
                    seg_idx,
                    (i, i + needle_chars.len()),
                ));
                i += needle_chars.len();
            } else {
                i += 1;
            }
        }
    }
}

fn check_sound_separators(
    group: &super::BracketGroup,
    seg_idx: usize,
    span: (usize, usize),
    diags: &mut Vec<Diagnostic>,
) {
    use super::Separator;
    let spaced = group
        .fragments
        .iter()
        .any(|f| f.trailing_separator == Separator::Space);
    let missing_trailing = group
        .fragments
        .last()
        .map(|f| f.trailing_separator != Separator::Hyphen)
        .unwrap_or(false);
    if spaced || missing_trailing {
        let detail = match (spaced, missing_trailing) {
            (true, true) => "space separators and a missing trailing hyphen",
            (true, false) => "space separators",
            _ => "a missing trailing hyphen",
        };
        diags.push(Diagnostic::new(
            Severity::Warning,
            "W004",
            format!("sound-repetition group has {detail}; expected `[x-x-]/s`"),
            seg_idx,
            span,
        ));
    }
}

/// W001: every fragment of the /s group equals the host word,
/// case-insensitively, and no /r label already covers the repetition.
#[allow(clippy::too_many_arguments)]
fn check_whole_word_repetition(
    segment: &Segment,
    chunk_idx: usize,
    part_idx: usize,
    chunk: &Chunk,
    group: &super::BracketGroup,
    seg_idx: usize,
    span: (usize, usize),
    diags: &mut Vec<Diagnostic>,
) {
    let host_chunk = if group.attached {
        chunk
    } else {
        match segment.chunks.get(chunk_idx + 1) {
            Some(next) if !next.sensitive => next,
            _ => return,
        }
    };
    let host = if group.attached {
        // literal text after this group within the chunk
        let mut text = String::new();
        for part in &chunk.parts[part_idx + 1..] {
            if let Part::Literal(t) = part {
                text.push_str(t);
            }
        }
        text
    } else {
        host_chunk.literal_text()
    };
    if host.is_empty() {
        return;
    }
    let host_lower = host.to_lowercase();
    let all_equal = group
        .fragments
        .iter()
        .all(|f| f.text.to_lowercase() == host_lower);
    if !all_equal {
        return;
    }
    let already_word_labeled = chunk
        .groups()
        .chain(host_chunk.groups())
        .any(|g| g.has_code(EventCode::WordRepetition));
    if already_word_labeled {
        return;
    }
    diags.push(Diagnostic::new(
        Severity::Warning,
        "W001",
        format!("whole word {host:?} repeated under /s; label whole-word repetitions /r"),
        seg_idx,
        span,
    ));
}

#[cfg(test)]
mod tests {
    use super::super::{parse, ParseOptions};
    use super::*;

    fn lint(s: &str) -> Vec<Diagnostic> {
        let t = parse(s, &ParseOptions::default())
            .expect("parse")
            .transcript;
        validate(&t, &RuleSet::default_rules())
    }

    fn rule_ids_of(diags: &[Diagnostic]) -> Vec<&str> {
        diags.iter().map(|d| d.rule_id.as_str()).collect()
    }

    #[test]
    fn w001_fires_on_whole_word_sound_repetition() {
        let diags = lint("[add add]/s add");
        assert_eq!(rule_ids_of(&diags), vec!["W001", "W004", "W005"]);
        assert_eq!(diags[0].location.span, (0, 11));
    }

    #[test]
    fn w001_quiet_when_word_label_present() {
        let diags = lint("[A-a-]/s[add]/radd");
        assert!(diags.iter().all(|d| d.rule_id != "W001"), "{diags:?}");
    }

    #[test]
    fn w001_quiet_on_partial_sound() {
        let diags = lint("[pr-pr-pr-]/sprepare");
        assert!(diags.is_empty(), "{diags:?}");
    }

    #[test]
    fn w002_flags_digits_with_exact_span() {
        let diags = lint("We meet at 2 thirty");
        assert_eq!(rule_ids_of(&diags), vec!["W002"]);
        assert_eq!(diags[0].location.span, (11, 12));
    }

    #[test]
    fn w003_flags_symbols() {
        let diags = lint("email info@university please");
        assert_eq!(rule_ids_of(&diags), vec!["W003"]);
        let diags = lint("see www.example.org today");
        assert_eq!(rule_ids_of(&diags), vec!["W003", "W003"]);
        assert!(lint("info at university dot org").is_empty());
    }

    #[test]
    fn w004_missing_trailing_hyphen_and_spaces() {
        let diags = lint("[sh/p]/sshopping");
        assert_eq!(rule_ids_of(&diags), vec!["W004"]);
        let diags = lint("[sh sh-]/sshopping");
        assert_eq!(rule_ids_of(&diags), vec!["W004"]);
    }

    #[test]
    fn w005_detached_sound_group() {
        let diags = lint("[sh-]/s shopping");
        assert_eq!(rule_ids_of(&diags), vec!["W005"]);
    }

    #[test]
    fn w006_dangling_block() {
        let diags = lint("I work /b");
        assert_eq!(rule_ids_of(&diags), vec!["W006"]);
        // not dangling when mid-segment
        let diags = lint("H/b How");
        assert!(diags.is_empty(), "{diags:?}");
    }

    #[test]
    fn canonical_guideline_examples_are_clean() {
        for s in ["M/pommy", "[my my]/r my name", "I [uh]/i work", "My /bname"] {
            assert!(lint(s).is_empty(), "expected no findings for {s:?}");
        }
    }

    #[test]
    fn rules_toggle_individually() {
        let t = parse("We meet at 2 thirty", &ParseOptions::default())
            .unwrap()
            .transcript;
        let mut rules = RuleSet::default_rules();
        rules.disable("W002").unwrap();
        assert!(validate(&t, &rules).is_empty());
        assert_eq!(rules.enable("W999"), Err(UnknownRuleId("W999".to_string())));
    }

    #[test]
    fn i001_emits_single_info_when_enabled() {
        let t = parse("M/pommy\nHow", &ParseOptions::default())
            .unwrap()
            .transcript;
        let mut rules = RuleSet::empty();
        rules.enable("I001").unwrap();
        let diags = validate(&t, &rules);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].severity, Severity::Info);
    }

    #[test]
    fn every_span_lies_within_its_segment() {
        for s in ["We meet at 2 thirty", "[add add]/s add", "x@y /b"] {
            let t = parse(s, &ParseOptions::default()).unwrap().transcript;
            let diags = validate(&t, &RuleSet::default_rules());
            for d in diags {
                let seg = &t.segments[d.location.segment];
                let len = super::super::serialize_segment(seg).chars().count();
                assert!(d.location.span.0 <= d.location.span.1);
                assert!(
                    d.location.span.1 <= len,
                    "span {:?} beyond {len}",
                    d.location.span
                );
            }
        }
    }
}
