//! Subcommand implementations. Each returns the process exit code: 0 clean,
//! 1 warnings or differences, 2 data errors (parse failures, malformed
//! files), while usage, configuration, and I/O failures bubble up as `Err`
//! and exit 3.

pub mod agree;
pub mod convert;
pub mod diff;
pub mod lint;
pub mod textgrid;

use crate::output::FileDiagnostic;
use std::error::Error;
use std::path::Path;
use stutter_annot_core::grammar::{parse, ParseOptions};
use stutter_annot_core::textgrid::{import_transcript, read_textgrid};
use stutter_annot_core::{Diagnostic, Transcript};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputKind {
    Text,
    Textgrid,
}

/// Dispatch by extension: `.TextGrid` (any case) is a TextGrid, everything
/// else is plain text. `--input-format` overrides.
pub fn detect_kind(path: &Path, forced: Option<InputKind>) -> InputKind {
    if let Some(kind) = forced {
        return kind;
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("textgrid") => InputKind::Textgrid,
        _ => InputKind::Text,
    }
}

pub enum Loaded {
    Parsed {
        transcript: Transcript,
    },
    /// Input was readable but not parseable; exit 2 territory.
    DataError {
        message: String,
        diagnostics: Vec<Diagnostic>,
    },
}

/// Reads and parses one input file. I/O failures are `Err` (exit 3); parse
/// and format failures come back as [`Loaded::DataError`].
pub fn load(path: &Path, kind: InputKind, tier: &str) -> Result<Loaded, Box<dyn Error>> {
    match kind {
        InputKind::Text => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let options = ParseOptions {
                source_name: Some(path.display().to_string()),
                ..ParseOptions::default()
            };
            match parse(&text, &options) {
                Ok(parsed) => Ok(Loaded::Parsed {
                    transcript: parsed.transcript,
                }),
                Err(diagnostics) => Ok(Loaded::DataError {
                    message: format!("{} does not parse", path.display()),
                    diagnostics,
                }),
            }
        }
        InputKind::Textgrid => {
            let bytes =
                std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let doc = match read_textgrid(&bytes) {
                Ok(doc) => doc,
                Err(err) => {
                    return Ok(Loaded::DataError {
                        message: format!("{}: {err}", path.display()),
                        diagnostics: Vec::new(),
                    })
                }
            };
            match import_transcript(&doc, tier) {
                Ok(imported) => Ok(Loaded::Parsed {
                    transcript: imported.transcript,
                }),
                Err(stutter_annot_core::textgrid::TextGridError::TierNotFound(name)) => {
                    Err(format!("{}: tier {name:?} not found", path.display()).into())
                }
                Err(err) => Ok(Loaded::DataError {
                    message: format!("{}: {err}", path.display()),
                    diagnostics: Vec::new(),
                }),
            }
        }
    }
}

pub fn print_data_error(path: &Path, message: &str, diagnostics: &[Diagnostic]) {
    eprintln!("stutter-annot: {message}");
    for d in diagnostics {
        eprintln!("{}:{}", path.display(), d);
    }
}

pub fn file_diags(path: &Path, tier: Option<&str>, diags: Vec<Diagnostic>) -> Vec<FileDiagnostic> {
    diags
        .into_iter()
        .map(|diagnostic| FileDiagnostic {
            file: path.display().to_string(),
            tier: tier.map(str::to_string),
            diagnostic,
        })
        .collect()
}
