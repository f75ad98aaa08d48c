//! `stutter-annot diff`: side-by-side disagreements between two
//! annotations of the same audio.

use super::{detect_kind, load, print_data_error, InputKind, Loaded};
use crate::output::{render_diff, OutputFormat};
use std::error::Error;
use std::path::PathBuf;
use stutter_annot_core::agreement::diff;
use stutter_annot_core::Transcript;

pub struct DiffArgs {
    pub path_a: PathBuf,
    pub path_b: PathBuf,
    pub tier: String,
    pub input_format: Option<InputKind>,
}

pub fn run(args: DiffArgs, format: OutputFormat) -> Result<u8, Box<dyn Error>> {
    let mut sides: Vec<Transcript> = Vec::with_capacity(2);
    for path in [&args.path_a, &args.path_b] {
        let kind = detect_kind(path, args.input_format);
        match load(path, kind, &args.tier)? {
            Loaded::Parsed { transcript, .. } => sides.push(transcript),
            Loaded::DataError {
                message,
                diagnostics,
            } => {
                print_data_error(path, &message, &diagnostics);
                return Ok(2);
            }
        }
    }
    let b = sides.pop().expect("two sides");
    let a = sides.pop().expect("two sides");
    let report = diff(&a, &b);
    print!("{}", render_diff(&report, format));
    Ok(u8::from(!report.is_empty()))
}
