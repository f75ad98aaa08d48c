//! `stutter-annot textgrid`: import, export, and gap lint.

use crate::config::CliConfig;
use crate::output::{format_seconds, render_gaps, OutputFormat};
use std::error::Error;
use std::path::{Path, PathBuf};
use stutter_annot_core::grammar::{parse, serialize, ParseOptions};
use stutter_annot_core::textgrid::{
    export_transcript, gap_lint, import_transcript, read_textgrid, write_textgrid, TextGridError,
};

pub struct ImportArgs {
    pub path: PathBuf,
    pub tier: String,
    pub out: PathBuf,
}

pub struct ExportArgs {
    pub path: PathBuf,
    pub times: Option<PathBuf>,
    pub xmin: Option<f64>,
    pub xmax: Option<f64>,
    pub out: PathBuf,
}

pub struct GaplintArgs {
    pub path: PathBuf,
    pub tier: String,
    pub threshold: Option<f64>,
}

/// TierNotFound and a bad threshold are usage errors (exit 3); everything
/// else wrong with the data is exit 2.
fn is_usage_error(err: &TextGridError) -> bool {
    matches!(
        err,
        TextGridError::TierNotFound(_) | TextGridError::NonPositiveThreshold
    )
}

fn data_error(err: TextGridError, path: &Path) -> Result<u8, Box<dyn Error>> {
    if is_usage_error(&err) {
        Err(format!("{}: {err}", path.display()).into())
    } else {
        eprintln!("stutter-annot: {}: {err}", path.display());
        Ok(2)
    }
}

pub fn run_import(args: ImportArgs) -> Result<u8, Box<dyn Error>> {
    let bytes = std::fs::read(&args.path)
        .map_err(|e| format!("cannot read {}: {e}", args.path.display()))?;
    let doc = match read_textgrid(&bytes) {
        Ok(doc) => doc,
        Err(err) => return data_error(err, &args.path),
    };
    let imported = match import_transcript(&doc, &args.tier) {
        Ok(imported) => imported,
        Err(err) => return data_error(err, &args.path),
    };
    for warning in &imported.warnings {
        eprintln!("{}:{}", args.path.display(), warning);
    }
    let mut text = serialize(&imported.transcript);
    if !text.is_empty() {
        text.push('\n');
    }
    std::fs::write(&args.out, text)
        .map_err(|e| format!("cannot write {}: {e}", args.out.display()))?;
    let mut times = String::new();
    for segment in &imported.transcript.segments {
        let (start, end) = segment.time_range.expect("imported segments carry times");
        times.push_str(&format!(
            "{}\t{}\n",
            format_seconds(start),
            format_seconds(end)
        ));
    }
    let times_path = sidecar_path(&args.out);
    std::fs::write(&times_path, times)
        .map_err(|e| format!("cannot write {}: {e}", times_path.display()))?;
    Ok(0)
}

pub fn run_export(args: ExportArgs) -> Result<u8, Box<dyn Error>> {
    let text = std::fs::read_to_string(&args.path)
        .map_err(|e| format!("cannot read {}: {e}", args.path.display()))?;
    let options = ParseOptions {
        source_name: Some(args.path.display().to_string()),
        ..ParseOptions::default()
    };
    let mut transcript = match parse(&text, &options) {
        Ok(parsed) => parsed.transcript,
        Err(errors) => {
            for e in &errors {
                eprintln!("{}:{}", args.path.display(), e);
            }
            return Ok(2);
        }
    };

    let times_path = args.times.unwrap_or_else(|| sidecar_path(&args.path));
    let times_text = std::fs::read_to_string(&times_path)
        .map_err(|e| format!("cannot read timestamps {}: {e}", times_path.display()))?;
    let times = parse_times(&times_text, &times_path)?;
    if times.len() != transcript.segments.len() {
        eprintln!(
            "stutter-annot: {} has {} segments but {} lists {} time ranges",
            args.path.display(),
            transcript.segments.len(),
            times_path.display(),
            times.len()
        );
        return Ok(2);
    }
    for (segment, (start, end)) in transcript.segments.iter_mut().zip(&times) {
        segment.time_range = Some((*start, *end));
    }

    let range_min = args.xmin.unwrap_or(0.0);
    let range_max = args.xmax.unwrap_or_else(|| match times.last() {
        Some(&(_, end)) => end,
        None => range_min + 1.0,
    });
    let doc = match export_transcript(&transcript, (range_min, range_max)) {
        Ok(doc) => doc,
        Err(err) => return data_error(err, &args.path),
    };
    let bytes = match write_textgrid(&doc) {
        Ok(bytes) => bytes,
        Err(err) => return data_error(err, &args.path),
    };
    std::fs::write(&args.out, bytes)
        .map_err(|e| format!("cannot write {}: {e}", args.out.display()))?;
    Ok(0)
}

pub fn run_gaplint(
    args: GaplintArgs,
    config: &CliConfig,
    format: OutputFormat,
) -> Result<u8, Box<dyn Error>> {
    let bytes = std::fs::read(&args.path)
        .map_err(|e| format!("cannot read {}: {e}", args.path.display()))?;
    let doc = match read_textgrid(&bytes) {
        Ok(doc) => doc,
        Err(err) => return data_error(err, &args.path),
    };
    let threshold = args.threshold.unwrap_or(config.gap_threshold);
    let findings = match gap_lint(&doc, &args.tier, threshold) {
        Ok(findings) => findings,
        Err(err) => return data_error(err, &args.path),
    };
    print!("{}", render_gaps(&findings, format));
    Ok(u8::from(!findings.is_empty()))
}

/// `out.txt` gets its timestamps in `out.txt.times`.
fn sidecar_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_os_string();
    os.push(".times");
    PathBuf::from(os)
}

fn parse_times(text: &str, path: &Path) -> Result<Vec<(f64, f64)>, Box<dyn Error>> {
    let mut times = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (start, end) = line.split_once('\t').ok_or_else(|| {
            format!(
                "{}:{}: expected `start<TAB>end`",
                path.display(),
                lineno + 1
            )
        })?;
        let start: f64 = start.trim().parse().map_err(|_| {
            format!(
                "{}:{}: bad start time {start:?}",
                path.display(),
                lineno + 1
            )
        })?;
        let end: f64 = end
            .trim()
            .parse()
            .map_err(|_| format!("{}:{}: bad end time {end:?}", path.display(), lineno + 1))?;
        times.push((start, end));
    }
    Ok(times)
}
