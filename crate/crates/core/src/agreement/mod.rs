//! Comparing independent annotations of the same audio: alignment and
//! diffing, chance-corrected agreement statistics, majority voting, and
//! clip-level confusion tables.

mod align;
mod diff;
mod kappa;

pub use align::{align, semantic_tokens, Alignment};
pub use diff::{diff, DiffEntry, DiffReport};
pub use kappa::{cohen_kappa, fleiss_kappa, Kappa};

use crate::grammar::EventCode;
use crate::transforms::ClipLabels;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgreementError {
    #[error("label vectors differ in length: {expected} vs {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("row {row} sums to {found}, expected {expected} raters")]
    RowSumMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("majority voting needs an odd number of annotators, got {0}")]
    EvenAnnotatorCount(usize),
}

/// Per-position majority over an odd number of binary label vectors.
pub fn majority_vote(labels: &[Vec<bool>]) -> Result<Vec<bool>, AgreementError> {
    if labels.is_empty() {
        return Err(AgreementError::EmptyInput);
    }
    if labels.len().is_multiple_of(2) {
        return Err(AgreementError::EvenAnnotatorCount(labels.len()));
    }
    let len = labels[0].len();
    for v in labels {
        if v.len() != len {
            return Err(AgreementError::LengthMismatch {
                expected: len,
                found: v.len(),
            });
        }
    }
    let majority = labels.len() / 2;
    Ok((0..len)
        .map(|i| labels.iter().filter(|v| v[i]).count() > majority)
        .collect())
}

/// Confusion counts for a single event code over a clip set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ConfusionCounts {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub true_negatives: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.true_positives + self.false_positives + self.false_negatives + self.true_negatives
    }

    /// FN + FP.
    pub fn disagreements(&self) -> usize {
        self.false_negatives + self.false_positives
    }
}

/// Per-code confusion table between a reference labeling and a candidate
/// labeling of the same clips. The candidate plays the prediction role:
/// a false negative is a clip the reference marks present and the candidate
/// marks absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfusionTable {
    pub total_clips: usize,
    rows: [(EventCode, ConfusionCounts); 5],
}

/// Row order used in rendered tables.
pub const TABLE_CODE_ORDER: [EventCode; 5] = [
    EventCode::Prolongation,
    EventCode::Block,
    EventCode::SoundRepetition,
    EventCode::WordRepetition,
    EventCode::Interjection,
];

impl ConfusionTable {
    pub fn counts(&self, code: EventCode) -> ConfusionCounts {
        self.rows
            .iter()
            .find(|(c, _)| *c == code)
            .map(|(_, counts)| *counts)
            .expect("all five codes present")
    }

    /// Disagreement share of `code` in hundredths of a percent, rounded
    /// half-up: 12.32% is 1232. Integer arithmetic keeps the rounding
    /// exact.
    pub fn disagreement_percent_hundredths(&self, code: EventCode) -> u64 {
        let disagreements = self.counts(code).disagreements() as u64;
        if self.total_clips == 0 {
            return 0;
        }
        let numerator = disagreements * 10_000;
        let denominator = self.total_clips as u64;
        let quotient = numerator / denominator;
        let remainder = numerator % denominator;
        quotient + u64::from(remainder * 2 >= denominator)
    }

    /// Formats the rounded percentage, e.g. `12.32%`.
    pub fn disagreement_percent_display(&self, code: EventCode) -> String {
        let hundredths = self.disagreement_percent_hundredths(code);
        format!("{}.{:02}%", hundredths / 100, hundredths % 100)
    }

    /// Plain-text table: code, FN, FP, total, percentage.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<17} {:>6} {:>6} {:>6} {:>8}\n",
            "code", "FN", "FP", "total", "%"
        ));
        for code in TABLE_CODE_ORDER {
            let counts = self.counts(code);
            out.push_str(&format!(
                "{:<17} {:>6} {:>6} {:>6} {:>8}\n",
                code.display_name(),
                counts.false_negatives,
                counts.false_positives,
                counts.disagreements(),
                self.disagreement_percent_display(code),
            ));
        }
        out
    }

    /// CSV rendering with a header row.
    pub fn render_csv(&self) -> String {
        let mut out = String::from("code,fn,fp,total,percent\n");
        for code in TABLE_CODE_ORDER {
            let counts = self.counts(code);
            let hundredths = self.disagreement_percent_hundredths(code);
            out.push_str(&format!(
                "{},{},{},{},{}.{:02}\n",
                code.name(),
                counts.false_negatives,
                counts.false_positives,
                counts.disagreements(),
                hundredths / 100,
                hundredths % 100
            ));
        }
        out
    }
}

/// Builds the per-code confusion table from two clip-label sequences over
/// the same segments, reference first.
pub fn confusion(
    reference: &[ClipLabels],
    candidate: &[ClipLabels],
) -> Result<ConfusionTable, AgreementError> {
    if reference.len() != candidate.len() {
        return Err(AgreementError::LengthMismatch {
            expected: reference.len(),
            found: candidate.len(),
        });
    }
    let mut rows = EventCode::ALL.map(|code| (code, ConfusionCounts::default()));
    for (reference, candidate) in reference.iter().zip(candidate) {
        for (code, counts) in rows.iter_mut() {
            match (reference.get(*code), candidate.get(*code)) {
                (true, true) => counts.true_positives += 1,
                (false, true) => counts.false_positives += 1,
                (true, false) => counts.false_negatives += 1,
                (false, false) => counts.true_negatives += 1,
            }
        }
    }
    Ok(ConfusionTable {
        total_clips: reference.len(),
        rows,
    })
}

/// Extracts one code's binary vector from clip labels.
pub fn label_vector(labels: &[ClipLabels], code: EventCode) -> Vec<bool> {
    labels.iter().map(|l| l.get(code)).collect()
}
