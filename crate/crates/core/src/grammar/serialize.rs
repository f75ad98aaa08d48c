//! Canonical serialization: the byte-faithful inverse of parsing.
//!
//! Everything a parsed transcript stores (fragment separators, mark
//! positions, code order) is emitted exactly as stored, so
//! `serialize(parse(s)) == s` whenever `s` already uses single spaces
//! between chunks. Programmatically built groups get canonical separators
//! from [`super::BracketGroup::canonical`].

use super::{Chunk, Fragment, MarkKind, Part, Segment, Transcript};

/// Renders a whole transcript, one segment per line.
pub fn serialize(transcript: &Transcript) -> String {
    transcript
        .segments
        .iter()
        .map(serialize_segment)
        .collect::<Vec<_>>()
        .join("\n")
}

/// Renders one segment: optional `speaker<TAB>` prefix, chunks joined by
/// single spaces.
pub fn serialize_segment(segment: &Segment) -> String {
    segment_layout(segment).0
}

/// Renders a segment and reports each chunk's character span within the
/// rendered text. Lint rules use this to attach source spans.
pub fn segment_layout(segment: &Segment) -> (String, Vec<(usize, usize)>) {
    let mut text = String::new();
    let mut len = 0usize;
    if let Some(speaker) = &segment.speaker {
        text.push_str(speaker);
        text.push('\t');
        len += speaker.chars().count() + 1;
    }
    let mut spans = Vec::with_capacity(segment.chunks.len());
    for (i, chunk) in segment.chunks.iter().enumerate() {
        if i > 0 {
            text.push(' ');
            len += 1;
        }
        let rendered = chunk_markup(chunk);
        let rendered_len = rendered.chars().count();
        spans.push((len, len + rendered_len));
        text.push_str(&rendered);
        len += rendered_len;
    }
    (text, spans)
}

/// Renders a single chunk's markup.
pub fn chunk_markup(chunk: &Chunk) -> String {
    if chunk.sensitive {
        return format!("<{}>", chunk.literal_text());
    }
    let mut out = String::new();
    for part in &chunk.parts {
        match part {
            Part::Literal(text) => out.push_str(text),
            Part::Mark(mark) => out.push_str(match mark.kind {
                MarkKind::Block => "/b",
                MarkKind::Prolongation => "/p",
            }),
            Part::Group(group) => {
                out.push('[');
                for fragment in &group.fragments {
                    out.push_str(&fragment_markup(fragment));
                }
                out.push(']');
                for code in &group.codes {
                    out.push_str(code.marker());
                }
            }
        }
    }
    out
}

fn fragment_markup(fragment: &Fragment) -> String {
    let mut out = String::new();
    let mut next = 0usize;
    for (i, ch) in fragment.text.chars().enumerate() {
        out.push(ch);
        while next < fragment.prolongation_offsets.len()
            && fragment.prolongation_offsets[next] == i + 1
        {
            out.push_str("/p");
            next += 1;
        }
    }
    out.push_str(fragment.trailing_separator.as_str());
    out
}
