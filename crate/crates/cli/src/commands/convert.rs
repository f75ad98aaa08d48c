//! `stutter-annot convert`: render one input in another form.

use super::{detect_kind, load, print_data_error, InputKind, Loaded};
use crate::config::CliConfig;
use crate::output::OutputFormat;
use std::error::Error;
use std::path::PathBuf;
use stutter_annot_core::grammar::to_json_pretty;
use stutter_annot_core::transforms::{
    events_to_csv, events_to_jsonl, extract_events, redact, to_semantic, to_verbatim,
    RedactionPolicy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ConvertTarget {
    Verbatim,
    Semantic,
    Events,
    Json,
}

pub struct ConvertArgs {
    pub path: PathBuf,
    pub to: ConvertTarget,
    pub tier: String,
    pub input_format: Option<InputKind>,
    pub redact: bool,
}

pub fn run(
    args: ConvertArgs,
    config: &CliConfig,
    format: OutputFormat,
) -> Result<u8, Box<dyn Error>> {
    let kind = detect_kind(&args.path, args.input_format);
    let mut transcript = match load(&args.path, kind, &args.tier)? {
        Loaded::Parsed { transcript, .. } => transcript,
        Loaded::DataError {
            message,
            diagnostics,
        } => {
            print_data_error(&args.path, &message, &diagnostics);
            return Ok(2);
        }
    };
    if args.redact {
        let fallback = RedactionPolicy::placeholder("REDACTED").expect("valid token");
        let policy = config.redaction.as_ref().unwrap_or(&fallback);
        transcript = redact(&transcript, policy);
    }
    match args.to {
        ConvertTarget::Verbatim => {
            for line in to_verbatim(&transcript) {
                println!("{line}");
            }
        }
        ConvertTarget::Semantic => {
            for line in to_semantic(&transcript) {
                println!("{line}");
            }
        }
        ConvertTarget::Events => {
            let events = extract_events(&transcript);
            match format {
                OutputFormat::Json => print!("{}", events_to_jsonl(&events)),
                _ => print!("{}", events_to_csv(&events)),
            }
        }
        ConvertTarget::Json => {
            println!("{}", to_json_pretty(&transcript));
        }
    }
    Ok(0)
}
