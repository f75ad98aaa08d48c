//! Diagnostics attached to parsed or validated transcripts.
//!
//! Every diagnostic carries a stable rule id (`E###` for parse errors,
//! `W###` for lint warnings, `I###` for informational notes) and a source
//! location: the segment index plus a character span within that segment's
//! source line. Spans count Unicode scalar values, not bytes.

use serde::Serialize;
use std::fmt;

/// How serious a diagnostic is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Info => write!(f, "info"),
            Severity::Warning => write!(f, "warning"),
            Severity::Error => write!(f, "error"),
        }
    }
}

/// Where in the source a diagnostic points.
///
/// `segment` is the zero-based segment (line) index. `span` is a half-open
/// `(start, end)` character range within that segment's text. For
/// diagnostics produced by [`crate::grammar::validate`] the span refers to
/// the canonical serialization of the segment, which for freshly parsed
/// input differs from the raw line only where runs of whitespace were
/// collapsed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Location {
    pub segment: usize,
    pub span: (usize, usize),
}

/// One finding from parsing or validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub rule_id: String,
    pub message: String,
    pub location: Location,
}

impl Diagnostic {
    pub fn new(
        severity: Severity,
        rule_id: &str,
        message: impl Into<String>,
        segment: usize,
        span: (usize, usize),
    ) -> Self {
        Diagnostic {
            severity,
            rule_id: rule_id.to_string(),
            message: message.into(),
            location: Location { segment, span },
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}[{}] {}",
            self.location.segment + 1,
            self.location.span.0 + 1,
            self.severity,
            self.rule_id,
            self.message
        )
    }
}
