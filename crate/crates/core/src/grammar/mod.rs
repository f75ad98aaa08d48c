//! The annotation markup grammar: domain types, parser, canonical
//! serializer, and lint rules.
//!
//! A transcript is a sequence of segments (one per line in plain-text
//! files). Each segment is a sequence of whitespace-delimited chunks, and a
//! chunk interleaves three kinds of part:
//!
//! * literal runs: plain transcribed text,
//! * point marks: `/b` (block) and `/p` (prolongation), anchored at a
//!   character offset within the chunk's literal text,
//! * bracket groups: `[...]` holding repeated fragments, tagged with one
//!   or two of `/s`, `/r`, `/i` immediately after the closing bracket.
//!
//! Sound-repetition fragments are separated by hyphens with a trailing
//! hyphen (`[pr-pr-pr-]/sprepare`); word-repetition and interjection
//! fragments are separated by spaces (`[my my]/r my name`). A fragment may
//! itself carry `/p` marks (`[n-n-n/p-n-]/snavigate`). A chunk wrapped in
//! `< >` marks sensitive information such as names and may contain spaces
//! (`<Athens, Ohio>`), but no other markup.
//!
//! Parsing preserves the input exactly (including noncanonical fragment
//! separators, which are reported as warnings rather than rejected), so
//! [`serialize`] is a byte-faithful inverse of [`parse`] up to whitespace
//! normalization: single spaces between chunks, one segment per line.

mod json;
mod parse;
mod serialize;
mod validate;

pub use json::{from_json, to_json, to_json_pretty, AstError};
pub use parse::{parse, parse_segment_text, ParseOptions, Parsed};
pub use serialize::{chunk_markup, segment_layout, serialize, serialize_segment};
pub use validate::{rule_explanation, rule_ids, rule_summary, validate, RuleSet, UnknownRuleId};

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// The five annotated stuttering event kinds and their markup codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventCode {
    Block,
    Prolongation,
    SoundRepetition,
    WordRepetition,
    Interjection,
}

impl EventCode {
    /// All codes, in declaration order.
    pub const ALL: [EventCode; 5] = [
        EventCode::Block,
        EventCode::Prolongation,
        EventCode::SoundRepetition,
        EventCode::WordRepetition,
        EventCode::Interjection,
    ];

    /// The textual markup form, e.g. `/b`.
    pub fn marker(self) -> &'static str {
        match self {
            EventCode::Block => "/b",
            EventCode::Prolongation => "/p",
            EventCode::SoundRepetition => "/s",
            EventCode::WordRepetition => "/r",
            EventCode::Interjection => "/i",
        }
    }

    /// Machine-readable name used in JSON, CSV, and TextGrid event tiers.
    pub fn name(self) -> &'static str {
        match self {
            EventCode::Block => "block",
            EventCode::Prolongation => "prolongation",
            EventCode::SoundRepetition => "sound_repetition",
            EventCode::WordRepetition => "word_repetition",
            EventCode::Interjection => "interjection",
        }
    }

    /// Human-readable name used in report tables.
    pub fn display_name(self) -> &'static str {
        match self {
            EventCode::Block => "block",
            EventCode::Prolongation => "prolongation",
            EventCode::SoundRepetition => "sound repetition",
            EventCode::WordRepetition => "word repetition",
            EventCode::Interjection => "interjection",
        }
    }

    /// Code for a marker letter (the `x` of `/x`), if any.
    pub fn from_letter(letter: char) -> Option<EventCode> {
        match letter {
            'b' => Some(EventCode::Block),
            'p' => Some(EventCode::Prolongation),
            's' => Some(EventCode::SoundRepetition),
            'r' => Some(EventCode::WordRepetition),
            'i' => Some(EventCode::Interjection),
            _ => None,
        }
    }

    pub fn from_name(name: &str) -> Option<EventCode> {
        EventCode::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for EventCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Which of the two point-mark codes a mark carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MarkKind {
    Block,
    Prolongation,
}

impl MarkKind {
    pub fn code(self) -> EventCode {
        match self {
            MarkKind::Block => EventCode::Block,
            MarkKind::Prolongation => EventCode::Prolongation,
        }
    }
}

/// A `/b` or `/p` mark anchored within a chunk.
///
/// `offset` counts the Unicode scalar values of literal-run text that
/// precede the mark within its chunk (bracket-group fragments do not
/// count). A block may sit at any offset including 0 and the end of the
/// chunk; a prolongation must follow at least one literal character, so its
/// offset is always ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointMark {
    pub kind: MarkKind,
    pub offset: usize,
}

/// Separator recorded after a fragment inside a bracket group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separator {
    Hyphen,
    Space,
    None,
}

impl Separator {
    pub fn as_str(self) -> &'static str {
        match self {
            Separator::Hyphen => "-",
            Separator::Space => " ",
            Separator::None => "",
        }
    }
}

/// One repeated unit inside a bracket group.
///
/// `prolongation_offsets` anchors fragment-internal `/p` marks; each offset
/// is ≥ 1 and ≤ the fragment length. The trailing separator is recorded as
/// written so that noncanonical input (for example a sound-repetition group
/// missing its trailing hyphen) survives a round trip byte-identically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub text: String,
    pub prolongation_offsets: Vec<usize>,
    pub trailing_separator: Separator,
}

impl Fragment {
    pub fn plain(text: impl Into<String>, trailing_separator: Separator) -> Fragment {
        Fragment {
            text: text.into(),
            prolongation_offsets: Vec::new(),
            trailing_separator,
        }
    }
}

/// A bracketed repetition group: `[fragments]` followed by its codes.
///
/// `attached` is true when another part follows the group within the same
/// chunk (the group abuts its host word with no space, as in
/// `[pr-pr-pr-]/sprepare`). The flag is normalized by [`Chunk::from_parts`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketGroup {
    pub fragments: Vec<Fragment>,
    pub codes: Vec<EventCode>,
    pub attached: bool,
}

impl BracketGroup {
    /// Builds a group with canonical separators: hyphens (with a trailing
    /// hyphen) when the codes include sound repetition, single spaces (no
    /// trailing separator) otherwise.
    pub fn canonical(fragment_texts: &[&str], codes: &[EventCode]) -> BracketGroup {
        let sound = codes.contains(&EventCode::SoundRepetition);
        let n = fragment_texts.len();
        let fragments = fragment_texts
            .iter()
            .enumerate()
            .map(|(i, text)| {
                let sep = if sound {
                    Separator::Hyphen
                } else if i + 1 < n {
                    Separator::Space
                } else {
                    Separator::None
                };
                Fragment::plain(*text, sep)
            })
            .collect();
        BracketGroup {
            fragments,
            codes: codes.to_vec(),
            attached: false,
        }
    }

    pub fn has_code(&self, code: EventCode) -> bool {
        self.codes.contains(&code)
    }
}

/// One element of a chunk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Part {
    Literal(String),
    Mark(PointMark),
    Group(BracketGroup),
}

impl Part {
    pub fn literal(text: impl Into<String>) -> Part {
        Part::Literal(text.into())
    }

    /// A block mark; the anchor offset is filled in by [`Chunk::from_parts`].
    pub fn block() -> Part {
        Part::Mark(PointMark {
            kind: MarkKind::Block,
            offset: 0,
        })
    }

    /// A prolongation mark; the anchor offset is filled in by
    /// [`Chunk::from_parts`].
    pub fn prolongation() -> Part {
        Part::Mark(PointMark {
            kind: MarkKind::Prolongation,
            offset: 0,
        })
    }

    pub fn as_group(&self) -> Option<&BracketGroup> {
        match self {
            Part::Group(g) => Some(g),
            _ => None,
        }
    }
}

/// Violations reported when assembling or importing structurally invalid
/// values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantViolation {
    #[error("chunk must contain at least one part")]
    EmptyChunk,
    #[error("literal run must not be empty")]
    EmptyLiteral,
    #[error("literal text contains reserved character {0:?}")]
    ReservedCharacter(char),
    #[error("literal text contains whitespace outside a sensitive chunk")]
    WhitespaceInLiteral,
    #[error("sensitive chunk may only contain literal text")]
    MarkupInSensitiveChunk,
    #[error("prolongation mark must follow at least one literal character")]
    ProlongationWithoutAnchor,
    #[error("point mark offset {stored} does not match its position ({computed})")]
    MarkOffsetMismatch { stored: usize, computed: usize },
    #[error("bracket group must contain at least one fragment")]
    EmptyGroup,
    #[error("fragment text must not be empty")]
    EmptyFragment,
    #[error("fragment prolongation offset {offset} outside 1..={len}")]
    FragmentOffsetOutOfRange { offset: usize, len: usize },
    #[error("fragment prolongation offsets must be nondecreasing")]
    UnsortedOffsets,
    #[error("only the last fragment of a group may omit its trailing separator")]
    MissingSeparator,
    #[error("bracket group must carry 1 or 2 codes, found {0}")]
    BadCodeCount(usize),
    #[error("bracket group codes must be drawn from /s, /r, /i; found {}", .0.marker())]
    PointCodeOnGroup(EventCode),
    #[error("duplicate group code {}", .0.marker())]
    DuplicateCode(EventCode),
    #[error("group attached flag is {stored} but its chunk position implies {computed}")]
    AttachedMismatch { stored: bool, computed: bool },
    #[error("segment time range must satisfy 0 <= start < end, both finite")]
    BadTimeRange,
    #[error("speaker label must not contain tabs or newlines")]
    BadSpeaker,
    #[error("placeholder token must not contain markup characters or whitespace")]
    BadPlaceholder,
}

/// Characters that may never appear in literal text.
pub(crate) const RESERVED: [char; 5] = ['[', ']', '/', '<', '>'];

pub(crate) fn check_literal_text(text: &str, allow_space: bool) -> Result<(), InvariantViolation> {
    if text.is_empty() {
        return Err(InvariantViolation::EmptyLiteral);
    }
    for ch in text.chars() {
        if RESERVED.contains(&ch) {
            return Err(InvariantViolation::ReservedCharacter(ch));
        }
        if ch.is_whitespace() && !(allow_space && ch == ' ') {
            return Err(InvariantViolation::WhitespaceInLiteral);
        }
    }
    Ok(())
}

fn check_group(group: &BracketGroup) -> Result<(), InvariantViolation> {
    if group.fragments.is_empty() {
        return Err(InvariantViolation::EmptyGroup);
    }
    // two fragments with no separator between them would reparse as one
    if group.fragments[..group.fragments.len() - 1]
        .iter()
        .any(|f| f.trailing_separator == Separator::None)
    {
        return Err(InvariantViolation::MissingSeparator);
    }
    for frag in &group.fragments {
        if frag.text.is_empty() {
            return Err(InvariantViolation::EmptyFragment);
        }
        check_literal_text(&frag.text, false)?;
        let len = frag.text.chars().count();
        for &off in &frag.prolongation_offsets {
            if off == 0 || off > len {
                return Err(InvariantViolation::FragmentOffsetOutOfRange { offset: off, len });
            }
        }
        if frag.prolongation_offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(InvariantViolation::UnsortedOffsets);
        }
    }
    if group.codes.is_empty() || group.codes.len() > 2 {
        return Err(InvariantViolation::BadCodeCount(group.codes.len()));
    }
    let mut seen = Vec::new();
    for &code in &group.codes {
        if matches!(code, EventCode::Block | EventCode::Prolongation) {
            return Err(InvariantViolation::PointCodeOnGroup(code));
        }
        if seen.contains(&code) {
            return Err(InvariantViolation::DuplicateCode(code));
        }
        seen.push(code);
    }
    Ok(())
}

/// One whitespace-delimited annotation unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    pub parts: Vec<Part>,
    pub sensitive: bool,
}

impl Chunk {
    /// Assembles a chunk, normalizing as it goes: adjacent literal runs are
    /// merged, point-mark offsets are recomputed from their positions, and
    /// group `attached` flags are set from chunk position. Fails when the
    /// result would violate a structural invariant (empty chunk, reserved
    /// characters in literals, prolongation with no preceding literal
    /// character, malformed group).
    pub fn from_parts(parts: Vec<Part>) -> Result<Chunk, InvariantViolation> {
        let mut merged: Vec<Part> = Vec::with_capacity(parts.len());
        let mut literal_len = 0usize;
        for part in parts {
            match part {
                Part::Literal(text) => {
                    check_literal_text(&text, false)?;
                    literal_len += text.chars().count();
                    if let Some(Part::Literal(prev)) = merged.last_mut() {
                        prev.push_str(&text);
                    } else {
                        merged.push(Part::Literal(text));
                    }
                }
                Part::Mark(mark) => {
                    if mark.kind == MarkKind::Prolongation && literal_len == 0 {
                        return Err(InvariantViolation::ProlongationWithoutAnchor);
                    }
                    merged.push(Part::Mark(PointMark {
                        kind: mark.kind,
                        offset: literal_len,
                    }));
                }
                Part::Group(group) => {
                    check_group(&group)?;
                    merged.push(Part::Group(group));
                }
            }
        }
        if merged.is_empty() {
            return Err(InvariantViolation::EmptyChunk);
        }
        let last = merged.len() - 1;
        for (i, part) in merged.iter_mut().enumerate() {
            if let Part::Group(group) = part {
                group.attached = i < last;
            }
        }
        Ok(Chunk {
            parts: merged,
            sensitive: false,
        })
    }

    /// A sensitive chunk (`<...>`). The text may contain spaces but no
    /// markup characters.
    pub fn sensitive(text: impl Into<String>) -> Result<Chunk, InvariantViolation> {
        let text = text.into();
        check_literal_text(&text, true)?;
        Ok(Chunk {
            parts: vec![Part::Literal(text)],
            sensitive: true,
        })
    }

    /// Concatenation of the chunk's literal runs (fragments excluded).
    pub fn literal_text(&self) -> String {
        let mut out = String::new();
        for part in &self.parts {
            if let Part::Literal(text) = part {
                out.push_str(text);
            }
        }
        out
    }

    pub fn groups(&self) -> impl Iterator<Item = &BracketGroup> {
        self.parts.iter().filter_map(Part::as_group)
    }

    /// Validates the invariants [`Chunk::from_parts`] establishes; used when
    /// importing ASTs from JSON, where stored offsets and flags may
    /// contradict structure.
    pub fn check(&self) -> Result<(), InvariantViolation> {
        if self.parts.is_empty() {
            return Err(InvariantViolation::EmptyChunk);
        }
        if self.sensitive {
            if self.parts.len() != 1 {
                return Err(InvariantViolation::MarkupInSensitiveChunk);
            }
            match &self.parts[0] {
                Part::Literal(text) => return check_literal_text(text, true),
                _ => return Err(InvariantViolation::MarkupInSensitiveChunk),
            }
        }
        let mut literal_len = 0usize;
        let mut prev_literal = false;
        let last = self.parts.len() - 1;
        for (i, part) in self.parts.iter().enumerate() {
            match part {
                Part::Literal(text) => {
                    if prev_literal {
                        // adjacent literal runs would break structural equality
                        return Err(InvariantViolation::EmptyLiteral);
                    }
                    check_literal_text(text, false)?;
                    literal_len += text.chars().count();
                    prev_literal = true;
                }
                Part::Mark(mark) => {
                    prev_literal = false;
                    if mark.kind == MarkKind::Prolongation && literal_len == 0 {
                        return Err(InvariantViolation::ProlongationWithoutAnchor);
                    }
                    if mark.offset != literal_len {
                        return Err(InvariantViolation::MarkOffsetMismatch {
                            stored: mark.offset,
                            computed: literal_len,
                        });
                    }
                }
                Part::Group(group) => {
                    prev_literal = false;
                    check_group(group)?;
                    let computed = i < last;
                    if group.attached != computed {
                        return Err(InvariantViolation::AttachedMismatch {
                            stored: group.attached,
                            computed,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// One annotated stretch of speech: a line in plain-text files, an interval
/// in TextGrid files.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub chunks: Vec<Chunk>,
    pub time_range: Option<(f64, f64)>,
    pub speaker: Option<String>,
}

impl Segment {
    pub fn new(chunks: Vec<Chunk>) -> Segment {
        Segment {
            chunks,
            time_range: None,
            speaker: None,
        }
    }

    pub fn with_time_range(mut self, start: f64, end: f64) -> Segment {
        self.time_range = Some((start, end));
        self
    }

    pub fn check(&self) -> Result<(), InvariantViolation> {
        for chunk in &self.chunks {
            chunk.check()?;
        }
        if let Some((start, end)) = self.time_range {
            if !start.is_finite() || !end.is_finite() || start < 0.0 || start >= end {
                return Err(InvariantViolation::BadTimeRange);
            }
        }
        if let Some(speaker) = &self.speaker {
            if speaker.is_empty() || speaker.contains(['\t', '\n', '\r']) {
                return Err(InvariantViolation::BadSpeaker);
            }
        }
        Ok(())
    }
}

/// A whole annotated document.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Transcript {
    pub segments: Vec<Segment>,
    pub source_name: Option<String>,
}

impl Transcript {
    pub fn new(segments: Vec<Segment>) -> Transcript {
        Transcript {
            segments,
            source_name: None,
        }
    }

    pub fn check(&self) -> Result<(), InvariantViolation> {
        for segment in &self.segments {
            segment.check()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_parts_merges_literals_and_anchors_marks() {
        let chunk = Chunk::from_parts(vec![
            Part::literal("w"),
            Part::prolongation(),
            Part::literal("or"),
            Part::literal("king"),
        ])
        .unwrap();
        assert_eq!(
            chunk.parts,
            vec![
                Part::Literal("w".into()),
                Part::Mark(PointMark {
                    kind: MarkKind::Prolongation,
                    offset: 1
                }),
                Part::Literal("orking".into()),
            ]
        );
        chunk.check().unwrap();
    }

    #[test]
    fn from_parts_rejects_prolongation_without_anchor() {
        let err = Chunk::from_parts(vec![Part::prolongation(), Part::literal("word")]);
        assert_eq!(err, Err(InvariantViolation::ProlongationWithoutAnchor));
        // a preceding group does not count as an anchor
        let err = Chunk::from_parts(vec![
            Part::Group(BracketGroup::canonical(
                &["ha"],
                &[EventCode::SoundRepetition],
            )),
            Part::prolongation(),
        ]);
        assert_eq!(err, Err(InvariantViolation::ProlongationWithoutAnchor));
    }

    #[test]
    fn from_parts_allows_block_anywhere() {
        let chunk = Chunk::from_parts(vec![Part::block()]).unwrap();
        assert_eq!(
            chunk.parts,
            vec![Part::Mark(PointMark {
                kind: MarkKind::Block,
                offset: 0
            })]
        );
        let chunk = Chunk::from_parts(vec![Part::literal("H"), Part::block()]).unwrap();
        assert_eq!(
            chunk.parts[1],
            Part::Mark(PointMark {
                kind: MarkKind::Block,
                offset: 1
            })
        );
    }

    #[test]
    fn attached_flag_follows_chunk_position() {
        let group = BracketGroup::canonical(&["pr", "pr"], &[EventCode::SoundRepetition]);
        let attached =
            Chunk::from_parts(vec![Part::Group(group.clone()), Part::literal("prepare")]).unwrap();
        assert!(attached.parts[0].as_group().unwrap().attached);
        let detached = Chunk::from_parts(vec![Part::Group(group)]).unwrap();
        assert!(!detached.parts[0].as_group().unwrap().attached);
    }

    #[test]
    fn canonical_group_separators() {
        let sound = BracketGroup::canonical(&["pr", "pr", "pr"], &[EventCode::SoundRepetition]);
        assert!(sound
            .fragments
            .iter()
            .all(|f| f.trailing_separator == Separator::Hyphen));
        let word = BracketGroup::canonical(&["my", "my"], &[EventCode::WordRepetition]);
        assert_eq!(word.fragments[0].trailing_separator, Separator::Space);
        assert_eq!(word.fragments[1].trailing_separator, Separator::None);
    }

    #[test]
    fn group_code_invariants() {
        let mut group = BracketGroup::canonical(&["uh"], &[EventCode::Interjection]);
        group.codes = vec![EventCode::Block];
        assert_eq!(
            check_group(&group),
            Err(InvariantViolation::PointCodeOnGroup(EventCode::Block))
        );
        group.codes = vec![EventCode::Interjection; 2];
        assert_eq!(
            check_group(&group),
            Err(InvariantViolation::DuplicateCode(EventCode::Interjection))
        );
        group.codes = vec![
            EventCode::Interjection,
            EventCode::WordRepetition,
            EventCode::SoundRepetition,
        ];
        assert_eq!(
            check_group(&group),
            Err(InvariantViolation::BadCodeCount(3))
        );
    }

    #[test]
    fn sensitive_chunk_allows_spaces_only() {
        let chunk = Chunk::sensitive("Athens, Ohio").unwrap();
        chunk.check().unwrap();
        assert!(Chunk::sensitive("a/b").is_err());
        assert!(Chunk::sensitive("").is_err());
        assert!(Chunk::sensitive("two\twords").is_err());
    }

    #[test]
    fn reserved_characters_rejected_in_literals() {
        for ch in RESERVED {
            let err = Chunk::from_parts(vec![Part::literal(format!("a{ch}b"))]);
            assert_eq!(err, Err(InvariantViolation::ReservedCharacter(ch)));
        }
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Transcript>();
        assert_send_sync::<Chunk>();
        assert_send_sync::<crate::diagnostics::Diagnostic>();
    }
}
