//! Praat TextGrid interop: reading and writing the long text format,
//! conversion between interval tiers and transcripts, and a lint for long
//! silent gaps that may hide unannotated blocks or quiet prolongations.

mod convert;
mod gaplint;
mod read;
mod write;

pub use convert::{export_transcript, import_transcript, Imported};
pub use gaplint::{gap_lint, GapFinding};
pub use read::read_textgrid;
pub use write::write_textgrid;

use crate::diagnostics::Diagnostic;
use thiserror::Error;

/// One timestamped interval of a tier.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub xmin: f64,
    pub xmax: f64,
    pub text: String,
}

impl Interval {
    pub fn new(xmin: f64, xmax: f64, text: impl Into<String>) -> Interval {
        Interval {
            xmin,
            xmax,
            text: text.into(),
        }
    }

    /// Empty or whitespace-only text counts as silence.
    pub fn is_empty(&self) -> bool {
        self.text.trim().is_empty()
    }
}

/// An interval tier: sorted, non-overlapping intervals within
/// `[xmin, xmax]`. Adjacent intervals may share endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Tier {
    pub name: String,
    pub xmin: f64,
    pub xmax: f64,
    pub intervals: Vec<Interval>,
}

/// A whole TextGrid document.
#[derive(Debug, Clone, PartialEq)]
pub struct TextGridDoc {
    pub xmin: f64,
    pub xmax: f64,
    pub tiers: Vec<Tier>,
}

impl TextGridDoc {
    pub fn tier(&self, name: &str) -> Option<&Tier> {
        self.tiers.iter().find(|t| t.name == name)
    }
}

#[derive(Debug, Error)]
pub enum TextGridError {
    #[error("malformed TextGrid header: {0}")]
    MalformedHeader(String),
    #[error("short TextGrid format is not supported; save as long text format")]
    ShortFormat,
    #[error("unsupported tier class {0:?}; only IntervalTier is supported")]
    UnsupportedTierClass(String),
    #[error("tier {tier:?}: intervals not monotonic at index {index}: {detail}")]
    NonMonotonicIntervals {
        tier: String,
        index: usize,
        detail: String,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("undecodable input: {0}")]
    Encoding(String),
    #[error("tier {0:?} not found")]
    TierNotFound(String),
    #[error("gap threshold must be positive")]
    NonPositiveThreshold,
    #[error("segment {0} has no time range; only timestamped transcripts can be exported")]
    MissingTimestamps(usize),
    #[error("segments {0} and {1} overlap or are out of order")]
    OverlappingSegments(usize, usize),
    #[error("segment {index} lies outside the document range {range:?}")]
    SegmentOutsideRange { index: usize, range: (f64, f64) },
    #[error("invalid document structure: {0}")]
    InvalidStructure(String),
    #[error("annotation errors in {count} interval(s); first: {first}")]
    AnnotationErrors { count: usize, first: Diagnostic },
}

/// Strict order with NaN rejected on either side.
pub(crate) fn strictly_before(a: f64, b: f64) -> bool {
    matches!(a.partial_cmp(&b), Some(std::cmp::Ordering::Less))
}

pub(crate) fn validate_tier(tier: &Tier) -> Result<(), TextGridError> {
    let err = |index: usize, detail: String| TextGridError::NonMonotonicIntervals {
        tier: tier.name.clone(),
        index,
        detail,
    };
    for (i, interval) in tier.intervals.iter().enumerate() {
        if !strictly_before(interval.xmin, interval.xmax) {
            return Err(err(
                i,
                format!("xmin {} is not below xmax {}", interval.xmin, interval.xmax),
            ));
        }
        if interval.xmin < tier.xmin || interval.xmax > tier.xmax {
            return Err(err(
                i,
                format!(
                    "interval ({}, {}) outside tier range ({}, {})",
                    interval.xmin, interval.xmax, tier.xmin, tier.xmax
                ),
            ));
        }
        if i > 0 && tier.intervals[i - 1].xmax > interval.xmin {
            return Err(err(
                i,
                format!(
                    "starts at {} before previous interval ends at {}",
                    interval.xmin,
                    tier.intervals[i - 1].xmax
                ),
            ));
        }
    }
    Ok(())
}

pub(crate) fn validate_doc(doc: &TextGridDoc) -> Result<(), TextGridError> {
    let ordered = matches!(
        doc.xmin.partial_cmp(&doc.xmax),
        Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal)
    );
    if !ordered {
        return Err(TextGridError::InvalidStructure(format!(
            "document xmin {} above xmax {}",
            doc.xmin, doc.xmax
        )));
    }
    for tier in &doc.tiers {
        if tier.xmin < doc.xmin || tier.xmax > doc.xmax {
            return Err(TextGridError::InvalidStructure(format!(
                "tier {:?} range ({}, {}) outside document range ({}, {})",
                tier.name, tier.xmin, tier.xmax, doc.xmin, doc.xmax
            )));
        }
        validate_tier(tier)?;
    }
    Ok(())
}
