//! Char-level parser for the annotation markup.

use super::validate::{validate, RuleSet};
use super::{
    BracketGroup, Chunk, EventCode, Fragment, MarkKind, Part, PointMark, Segment, Separator,
    Transcript, RESERVED,
};
use crate::diagnostics::{Diagnostic, Severity};
use unicode_normalization::UnicodeNormalization;

/// Options for [`parse`].
#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// When true, text before the first tab on a line is taken as a speaker
    /// label rather than transcript content.
    pub speaker_prefix: bool,
    /// Recorded on the resulting transcript, e.g. the input file name.
    pub source_name: Option<String>,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            speaker_prefix: true,
            source_name: None,
        }
    }
}

/// A successfully parsed transcript together with any recoverable
/// deviations found on the way (noncanonical sound-repetition separators,
/// detached sound-repetition groups, dangling blocks).
#[derive(Debug, Clone)]
pub struct Parsed {
    pub transcript: Transcript,
    pub warnings: Vec<Diagnostic>,
}

/// Parse errors carry a stable rule id so they can be explained and
/// filtered like lint findings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ErrorKind {
    UnknownCode(Option<char>),
    UnclosedBracket,
    UnclosedAngle,
    EmptyGroup,
    GroupWithoutCode,
    ProlongationAtChunkStart,
    NestedBrackets,
    DuplicateGroupCode(EventCode),
    TooManyGroupCodes,
    EmptyFragment,
    ProlongationAtFragmentStart,
    MarkInsideGroup(EventCode),
    MarkupInsideSensitive(char),
    SensitiveNotStandalone,
    EmptySensitive,
    UnmatchedBracketClose,
    UnmatchedAngleClose,
    StrayGroupCode(EventCode),
}

impl ErrorKind {
    pub(crate) fn rule_id(self) -> &'static str {
        match self {
            ErrorKind::UnknownCode(_) => "E001",
            ErrorKind::UnclosedBracket => "E002",
            ErrorKind::UnclosedAngle => "E003",
            ErrorKind::EmptyGroup => "E004",
            ErrorKind::GroupWithoutCode => "E005",
            ErrorKind::ProlongationAtChunkStart => "E006",
            ErrorKind::NestedBrackets => "E007",
            ErrorKind::DuplicateGroupCode(_) => "E008",
            ErrorKind::TooManyGroupCodes => "E009",
            ErrorKind::EmptyFragment => "E010",
            ErrorKind::ProlongationAtFragmentStart => "E011",
            ErrorKind::MarkInsideGroup(_) => "E012",
            ErrorKind::MarkupInsideSensitive(_) => "E013",
            ErrorKind::SensitiveNotStandalone => "E014",
            ErrorKind::EmptySensitive => "E015",
            ErrorKind::UnmatchedBracketClose => "E016",
            ErrorKind::UnmatchedAngleClose => "E017",
            ErrorKind::StrayGroupCode(_) => "E018",
        }
    }

    fn message(self) -> String {
        match self {
            ErrorKind::UnknownCode(Some(ch)) => {
                format!("unknown code `/{ch}`; expected one of /b /p /s /r /i")
            }
            ErrorKind::UnknownCode(None) => {
                "`/` must be followed by a code letter (b, p, s, r, i)".to_string()
            }
            ErrorKind::UnclosedBracket => "bracket group is never closed with `]`".to_string(),
            ErrorKind::UnclosedAngle => "sensitive span is never closed with `>`".to_string(),
            ErrorKind::EmptyGroup => "bracket group contains no fragments".to_string(),
            ErrorKind::GroupWithoutCode => {
                "bracket group must be followed by /s, /r, or /i".to_string()
            }
            ErrorKind::ProlongationAtChunkStart => {
                "prolongation mark must follow at least one literal character".to_string()
            }
            ErrorKind::NestedBrackets => "bracket groups cannot be nested".to_string(),
            ErrorKind::DuplicateGroupCode(code) => {
                format!("group code {} given twice", code.marker())
            }
            ErrorKind::TooManyGroupCodes => "a bracket group carries at most two codes".to_string(),
            ErrorKind::EmptyFragment => "empty fragment inside bracket group".to_string(),
            ErrorKind::ProlongationAtFragmentStart => {
                "prolongation mark inside a group must follow at least one fragment character"
                    .to_string()
            }
            ErrorKind::MarkInsideGroup(code) => format!(
                "{} cannot appear inside a bracket group (only /p within a fragment)",
                code.marker()
            ),
            ErrorKind::MarkupInsideSensitive(ch) => {
                format!("markup character `{ch}` inside a sensitive span")
            }
            ErrorKind::SensitiveNotStandalone => {
                "a sensitive span must form a whole chunk, separated by spaces".to_string()
            }
            ErrorKind::EmptySensitive => "sensitive span is empty".to_string(),
            ErrorKind::UnmatchedBracketClose => "`]` without a matching `[`".to_string(),
            ErrorKind::UnmatchedAngleClose => "`>` without a matching `<`".to_string(),
            ErrorKind::StrayGroupCode(code) => {
                format!("{} may only follow a closing bracket `]`", code.marker())
            }
        }
    }
}

struct LineError {
    kind: ErrorKind,
    span: (usize, usize),
}

impl LineError {
    fn at(kind: ErrorKind, start: usize, end: usize) -> LineError {
        LineError {
            kind,
            span: (start, end),
        }
    }
}

/// Rules the parser itself reports as warnings on otherwise valid input.
fn deviation_rules() -> RuleSet {
    let mut rules = RuleSet::empty();
    for id in ["W004", "W005", "W006"] {
        rules.enable(id).expect("built-in rule id");
    }
    rules
}

/// Parses annotation markup into a [`Transcript`].
///
/// The input is NFC-normalized first; one segment per line; chunks are
/// whitespace-delimited except inside `<...>` spans. Trailing blank lines
/// are dropped so that parse and serialize stay inverse to each other
/// (serialize never emits a trailing newline). On failure every offending
/// line contributes one error diagnostic. On success, recoverable
/// deviations from the canonical form are returned as warnings.
pub fn parse(source: &str, options: &ParseOptions) -> Result<Parsed, Vec<Diagnostic>> {
    let source: String = source.nfc().collect();
    let mut segments = Vec::new();
    let mut errors = Vec::new();
    for (index, line) in source.lines().enumerate() {
        match parse_line(line, options) {
            Ok(segment) => segments.push(segment),
            Err(err) => errors.push(Diagnostic::new(
                Severity::Error,
                err.kind.rule_id(),
                err.kind.message(),
                index,
                err.span,
            )),
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    while segments
        .last()
        .is_some_and(|s: &Segment| s.chunks.is_empty() && s.speaker.is_none())
    {
        segments.pop();
    }
    let transcript = Transcript {
        segments,
        source_name: options.source_name.clone(),
    };
    let warnings = validate(&transcript, &deviation_rules());
    Ok(Parsed {
        transcript,
        warnings,
    })
}

/// Parses the text of a single segment (for example one TextGrid interval).
/// Newlines are treated as ordinary whitespace and no speaker prefix is
/// recognized.
pub fn parse_segment_text(text: &str) -> Result<(Segment, Vec<Diagnostic>), Diagnostic> {
    let text: String = text
        .nfc()
        .map(|c| if c == '\n' || c == '\r' { ' ' } else { c })
        .collect();
    let options = ParseOptions {
        speaker_prefix: false,
        source_name: None,
    };
    match parse_line(&text, &options) {
        Ok(segment) => {
            let transcript = Transcript::new(vec![segment]);
            let warnings = validate(&transcript, &deviation_rules());
            let segment = transcript.segments.into_iter().next().expect("one segment");
            Ok((segment, warnings))
        }
        Err(err) => Err(Diagnostic::new(
            Severity::Error,
            err.kind.rule_id(),
            err.kind.message(),
            0,
            err.span,
        )),
    }
}

fn parse_line(line: &str, options: &ParseOptions) -> Result<Segment, LineError> {
    let chars: Vec<char> = line.chars().collect();
    let mut pos = 0usize;
    let mut speaker = None;
    if options.speaker_prefix {
        if let Some(tab) = chars.iter().position(|&c| c == '\t') {
            let label: String = chars[..tab].iter().collect();
            if !label.is_empty() {
                speaker = Some(label);
            }
            pos = tab + 1;
        }
    }
    let mut chunks = Vec::new();
    while pos < chars.len() {
        if chars[pos].is_whitespace() {
            pos += 1;
            continue;
        }
        let chunk = if chars[pos] == '<' {
            parse_sensitive_chunk(&chars, &mut pos)?
        } else {
            parse_chunk(&chars, &mut pos)?
        };
        chunks.push(chunk);
    }
    let mut segment = Segment::new(chunks);
    segment.speaker = speaker;
    Ok(segment)
}

fn parse_sensitive_chunk(chars: &[char], pos: &mut usize) -> Result<Chunk, LineError> {
    let start = *pos;
    *pos += 1; // consume '<'
    let mut text = String::new();
    loop {
        match chars.get(*pos) {
            None => return Err(LineError::at(ErrorKind::UnclosedAngle, start, chars.len())),
            Some('>') => {
                *pos += 1;
                break;
            }
            Some(&ch) if RESERVED.contains(&ch) => {
                return Err(LineError::at(
                    ErrorKind::MarkupInsideSensitive(ch),
                    *pos,
                    *pos + 1,
                ));
            }
            Some(&ch) => {
                text.push(ch);
                *pos += 1;
            }
        }
    }
    if text.is_empty() {
        return Err(LineError::at(ErrorKind::EmptySensitive, start, *pos));
    }
    if let Some(&next) = chars.get(*pos) {
        if !next.is_whitespace() {
            return Err(LineError::at(
                ErrorKind::SensitiveNotStandalone,
                start,
                *pos + 1,
            ));
        }
    }
    Chunk::sensitive(text).map_err(|_| LineError::at(ErrorKind::EmptySensitive, start, *pos))
}

fn parse_chunk(chars: &[char], pos: &mut usize) -> Result<Chunk, LineError> {
    let chunk_start = *pos;
    let mut parts: Vec<Part> = Vec::new();
    let mut literal = String::new();
    let mut literal_len = 0usize;

    macro_rules! flush_literal {
        () => {
            if !literal.is_empty() {
                parts.push(Part::Literal(std::mem::take(&mut literal)));
            }
        };
    }

    while let Some(&ch) = chars.get(*pos) {
        if ch.is_whitespace() {
            break;
        }
        match ch {
            '[' => {
                flush_literal!();
                let group = parse_group(chars, pos)?;
                parts.push(Part::Group(group));
            }
            ']' => {
                return Err(LineError::at(
                    ErrorKind::UnmatchedBracketClose,
                    *pos,
                    *pos + 1,
                ))
            }
            '<' => {
                return Err(LineError::at(
                    ErrorKind::SensitiveNotStandalone,
                    *pos,
                    *pos + 1,
                ))
            }
            '>' => {
                return Err(LineError::at(
                    ErrorKind::UnmatchedAngleClose,
                    *pos,
                    *pos + 1,
                ))
            }
            '/' => {
                let code_start = *pos;
                let code = read_code(chars, pos)?;
                match code {
                    EventCode::Block => {
                        flush_literal!();
                        parts.push(Part::Mark(PointMark {
                            kind: MarkKind::Block,
                            offset: literal_len,
                        }));
                    }
                    EventCode::Prolongation => {
                        if literal_len == 0 {
                            return Err(LineError::at(
                                ErrorKind::ProlongationAtChunkStart,
                                code_start,
                                *pos,
                            ));
                        }
                        flush_literal!();
                        parts.push(Part::Mark(PointMark {
                            kind: MarkKind::Prolongation,
                            offset: literal_len,
                        }));
                    }
                    other => {
                        return Err(LineError::at(
                            ErrorKind::StrayGroupCode(other),
                            code_start,
                            *pos,
                        ))
                    }
                }
            }
            _ => {
                literal.push(ch);
                literal_len += 1;
                *pos += 1;
            }
        }
    }
    flush_literal!();
    Chunk::from_parts(parts).map_err(|_| {
        // from_parts failures on parser-produced parts can only be the
        // empty-chunk case, which the caller's whitespace skipping prevents;
        // keep a conservative span anyway.
        LineError::at(ErrorKind::EmptyGroup, chunk_start, *pos)
    })
}

/// Reads `/x` at `pos`, leaving `pos` after the letter.
fn read_code(chars: &[char], pos: &mut usize) -> Result<EventCode, LineError> {
    let slash = *pos;
    *pos += 1;
    match chars.get(*pos) {
        None => Err(LineError::at(ErrorKind::UnknownCode(None), slash, *pos)),
        Some(&letter) => match EventCode::from_letter(letter) {
            Some(code) => {
                *pos += 1;
                Ok(code)
            }
            None => Err(LineError::at(
                ErrorKind::UnknownCode(Some(letter)),
                slash,
                *pos + 1,
            )),
        },
    }
}

fn parse_group(chars: &[char], pos: &mut usize) -> Result<BracketGroup, LineError> {
    let open = *pos;
    *pos += 1; // consume '['
    let mut fragments: Vec<Fragment> = Vec::new();
    let mut text = String::new();
    let mut prolongation_offsets: Vec<usize> = Vec::new();

    macro_rules! end_fragment {
        ($sep:expr, $err_span:expr) => {{
            if text.is_empty() {
                return Err(LineError::at(
                    ErrorKind::EmptyFragment,
                    $err_span,
                    $err_span + 1,
                ));
            }
            fragments.push(Fragment {
                text: std::mem::take(&mut text),
                prolongation_offsets: std::mem::take(&mut prolongation_offsets),
                trailing_separator: $sep,
            });
        }};
    }

    loop {
        match chars.get(*pos) {
            None => return Err(LineError::at(ErrorKind::UnclosedBracket, open, chars.len())),
            Some(']') => {
                if !text.is_empty() {
                    fragments.push(Fragment {
                        text: std::mem::take(&mut text),
                        prolongation_offsets: std::mem::take(&mut prolongation_offsets),
                        trailing_separator: Separator::None,
                    });
                }
                *pos += 1;
                break;
            }
            Some('-') => {
                end_fragment!(Separator::Hyphen, *pos);
                *pos += 1;
            }
            Some(' ') => {
                end_fragment!(Separator::Space, *pos);
                *pos += 1;
            }
            Some('[') => return Err(LineError::at(ErrorKind::NestedBrackets, *pos, *pos + 1)),
            Some(&ch) if ch == '<' || ch == '>' => {
                return Err(LineError::at(
                    ErrorKind::MarkupInsideSensitive(ch),
                    *pos,
                    *pos + 1,
                ))
            }
            Some('/') => {
                let code_start = *pos;
                let code = read_code(chars, pos)?;
                match code {
                    EventCode::Prolongation => {
                        let len = text.chars().count();
                        if len == 0 {
                            return Err(LineError::at(
                                ErrorKind::ProlongationAtFragmentStart,
                                code_start,
                                *pos,
                            ));
                        }
                        prolongation_offsets.push(len);
                    }
                    other => {
                        return Err(LineError::at(
                            ErrorKind::MarkInsideGroup(other),
                            code_start,
                            *pos,
                        ))
                    }
                }
            }
            Some(&ch) if ch.is_whitespace() => {
                // a tab inside brackets is taken as an unclosed group
                return Err(LineError::at(ErrorKind::UnclosedBracket, open, *pos));
            }
            Some(&ch) => {
                text.push(ch);
                *pos += 1;
            }
        }
    }

    if fragments.is_empty() {
        return Err(LineError::at(ErrorKind::EmptyGroup, open, *pos));
    }

    // codes directly after `]`
    let mut codes: Vec<EventCode> = Vec::new();
    while chars.get(*pos) == Some(&'/') {
        let code_start = *pos;
        let mut peek = *pos;
        let code = read_code(chars, &mut peek)?;
        match code {
            EventCode::SoundRepetition | EventCode::WordRepetition | EventCode::Interjection => {
                if codes.contains(&code) {
                    return Err(LineError::at(
                        ErrorKind::DuplicateGroupCode(code),
                        code_start,
                        peek,
                    ));
                }
                if codes.len() == 2 {
                    return Err(LineError::at(
                        ErrorKind::TooManyGroupCodes,
                        code_start,
                        peek,
                    ));
                }
                codes.push(code);
                *pos = peek;
            }
            // /b or /p after the codes belongs to the chunk, provided the
            // group already has at least one code
            _ => break,
        }
    }
    if codes.is_empty() {
        return Err(LineError::at(ErrorKind::GroupWithoutCode, open, *pos));
    }

    Ok(BracketGroup {
        fragments,
        codes,
        attached: false, // normalized by Chunk::from_parts
    })
}
