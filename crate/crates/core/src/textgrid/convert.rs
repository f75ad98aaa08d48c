//! Conversion between TextGrid interval tiers and transcripts.

use super::{Interval, TextGridDoc, TextGridError, Tier};
use crate::diagnostics::Diagnostic;
use crate::grammar::{parse_segment_text, serialize_segment, Segment, Transcript};
use crate::transforms::extract_events;

/// A transcript imported from a tier, with lint warnings carried through.
/// Warning locations use segment indices (one segment per non-empty
/// interval, in tier order); the segment's `time_range` identifies the
/// source interval.
#[derive(Debug, Clone)]
pub struct Imported {
    pub transcript: Transcript,
    pub warnings: Vec<Diagnostic>,
}

/// Builds a transcript from the named tier: one segment per non-empty
/// interval, annotation markup parsed, `time_range` set from the interval.
pub fn import_transcript(doc: &TextGridDoc, tier_name: &str) -> Result<Imported, TextGridError> {
    let tier = doc
        .tier(tier_name)
        .ok_or_else(|| TextGridError::TierNotFound(tier_name.to_string()))?;
    let mut segments = Vec::new();
    let mut warnings = Vec::new();
    let mut errors = Vec::new();
    for interval in tier.intervals.iter().filter(|iv| !iv.is_empty()) {
        let seg_index = segments.len();
        match parse_segment_text(&interval.text) {
            Ok((mut segment, segment_warnings)) => {
                segment.time_range = Some((interval.xmin, interval.xmax));
                segments.push(segment);
                warnings.extend(segment_warnings.into_iter().map(|mut w| {
                    w.location.segment = seg_index;
                    w
                }));
            }
            Err(mut diagnostic) => {
                diagnostic.location.segment = seg_index;
                errors.push(diagnostic);
            }
        }
    }
    if let Some(first) = errors.first().cloned() {
        return Err(TextGridError::AnnotationErrors {
            count: errors.len(),
            first,
        });
    }
    Ok(Imported {
        transcript: Transcript::new(segments),
        warnings,
    })
}

/// Renders a timestamped transcript as a TextGrid with two tiers covering
/// `doc_range` completely:
///
/// * `annotation`: the canonical markup of each segment,
/// * `events`: semicolon-joined event-code names per segment.
///
/// Gaps between segments become empty intervals. Segments must be sorted by
/// start time, non-overlapping, and contained in `doc_range`.
pub fn export_transcript(
    transcript: &Transcript,
    doc_range: (f64, f64),
) -> Result<TextGridDoc, TextGridError> {
    let (range_min, range_max) = doc_range;
    if !super::strictly_before(range_min, range_max) {
        return Err(TextGridError::InvalidStructure(format!(
            "document range ({range_min}, {range_max}) is empty"
        )));
    }
    let mut spans = Vec::with_capacity(transcript.segments.len());
    for (i, segment) in transcript.segments.iter().enumerate() {
        let (start, end) = segment
            .time_range
            .ok_or(TextGridError::MissingTimestamps(i))?;
        if start < range_min || end > range_max {
            return Err(TextGridError::SegmentOutsideRange {
                index: i,
                range: doc_range,
            });
        }
        if let Some(&(_, prev_end)) = spans.last() {
            let _: f64 = prev_end;
            if start < prev_end {
                return Err(TextGridError::OverlappingSegments(i - 1, i));
            }
        }
        spans.push((start, end));
    }

    let mut events_per_segment: Vec<Vec<&'static str>> =
        vec![Vec::new(); transcript.segments.len()];
    for event in extract_events(transcript) {
        events_per_segment[event.segment_index].push(event.code.name());
    }

    let annotation = tile_tier(
        "annotation",
        doc_range,
        &spans,
        transcript.segments.iter().map(segment_markup),
    );
    let events = tile_tier(
        "events",
        doc_range,
        &spans,
        events_per_segment.iter().map(|names| names.join(";")),
    );
    let doc = TextGridDoc {
        xmin: range_min,
        xmax: range_max,
        tiers: vec![annotation, events],
    };
    super::validate_doc(&doc)?;
    Ok(doc)
}

/// Chunk markup without the speaker prefix; TextGrid tiers carry times, not
/// speakers.
fn segment_markup(segment: &Segment) -> String {
    let stripped = Segment {
        chunks: segment.chunks.clone(),
        time_range: None,
        speaker: None,
    };
    serialize_segment(&stripped)
}

fn tile_tier(
    name: &str,
    (range_min, range_max): (f64, f64),
    spans: &[(f64, f64)],
    texts: impl Iterator<Item = String>,
) -> Tier {
    let mut intervals = Vec::new();
    let mut cursor = range_min;
    for ((start, end), text) in spans.iter().copied().zip(texts) {
        if start > cursor {
            intervals.push(Interval::new(cursor, start, ""));
        }
        intervals.push(Interval::new(start, end, text));
        cursor = end;
    }
    if cursor < range_max || intervals.is_empty() {
        intervals.push(Interval::new(cursor, range_max, ""));
    }
    Tier {
        name: name.to_string(),
        xmin: range_min,
        xmax: range_max,
        intervals,
    }
}
