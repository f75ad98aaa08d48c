//! Silent-gap lint: long empty-text spans in a tier can hide blocks or very
//! quiet prolongations that auto-segmentation skipped, so they deserve a
//! listen.

use super::{TextGridDoc, TextGridError};
use serde::Serialize;

/// One maximal empty span at or above the duration threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapFinding {
    pub tier: String,
    pub start: f64,
    pub end: f64,
    /// Text of the nearest non-empty interval before the gap, if any.
    pub before: Option<String>,
    /// Text of the nearest non-empty interval after the gap, if any.
    pub after: Option<String>,
}

impl GapFinding {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

/// Reports every maximal span of the tier's timeline without speech text,
/// whether empty intervals, whitespace-only intervals, or uncovered time,
/// whose
/// duration is at least `threshold_seconds`. Spans before the first and
/// after the last non-empty interval are included.
pub fn gap_lint(
    doc: &TextGridDoc,
    tier_name: &str,
    threshold_seconds: f64,
) -> Result<Vec<GapFinding>, TextGridError> {
    if !super::strictly_before(0.0, threshold_seconds) {
        return Err(TextGridError::NonPositiveThreshold);
    }
    let tier = doc
        .tier(tier_name)
        .ok_or_else(|| TextGridError::TierNotFound(tier_name.to_string()))?;

    let spoken: Vec<(f64, f64, &str)> = tier
        .intervals
        .iter()
        .filter(|iv| !iv.is_empty())
        .map(|iv| (iv.xmin, iv.xmax, iv.text.as_str()))
        .collect();

    let mut findings = Vec::new();
    let mut push_gap = |start: f64, end: f64, before: Option<&str>, after: Option<&str>| {
        if end - start >= threshold_seconds {
            findings.push(GapFinding {
                tier: tier.name.clone(),
                start,
                end,
                before: before.map(str::to_string),
                after: after.map(str::to_string),
            });
        }
    };

    let mut cursor = tier.xmin;
    let mut previous_text: Option<&str> = None;
    for &(start, end, text) in &spoken {
        push_gap(cursor, start, previous_text, Some(text));
        cursor = end;
        previous_text = Some(text);
    }
    push_gap(cursor, tier.xmax, previous_text, None);
    Ok(findings)
}
