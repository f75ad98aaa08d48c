//! `stutter-annot lint`: diagnostics over annotation files.

use super::{detect_kind, file_diags, InputKind};
use crate::config::CliConfig;
use crate::output::{render_diagnostics, FileDiagnostic, OutputFormat};
use std::error::Error;
use std::path::{Path, PathBuf};
use stutter_annot_core::grammar::{
    parse, parse_segment_text, rule_explanation, rule_ids, rule_summary, validate, ParseOptions,
};
use stutter_annot_core::textgrid::read_textgrid;
use stutter_annot_core::{Diagnostic, Severity, Transcript};

/// Container-level failures (unreadable TextGrid structure and the like)
/// reported through the diagnostics stream.
const CONTAINER_RULE: &str = "E000";

pub struct LintArgs {
    pub paths: Vec<PathBuf>,
    pub explain: Option<String>,
    pub input_format: Option<InputKind>,
    pub quiet_warnings: bool,
}

pub fn run(args: LintArgs, config: &CliConfig, format: OutputFormat) -> Result<u8, Box<dyn Error>> {
    if let Some(rule) = &args.explain {
        return explain(rule);
    }
    if args.paths.is_empty() {
        return Err("lint needs at least one input file (or --explain RULE)".into());
    }
    let mut findings: Vec<FileDiagnostic> = Vec::new();
    for path in &args.paths {
        match detect_kind(path, args.input_format) {
            InputKind::Text => lint_text(path, config, &mut findings)?,
            InputKind::Textgrid => lint_textgrid(path, config, &mut findings)?,
        }
    }
    print!("{}", render_diagnostics(&findings, format));
    let worst = findings
        .iter()
        .map(|d| d.diagnostic.severity)
        .max()
        .unwrap_or(Severity::Info);
    Ok(match worst {
        Severity::Error => 2,
        Severity::Warning if args.quiet_warnings => 0,
        Severity::Warning => 1,
        Severity::Info => 0,
    })
}

fn explain(rule: &str) -> Result<u8, Box<dyn Error>> {
    match (rule_summary(rule), rule_explanation(rule)) {
        (Some(summary), Some(explanation)) => {
            println!("{rule}: {summary}\n\n{explanation}");
            Ok(0)
        }
        _ => Err(format!(
            "unknown rule {rule:?}; known rules: {}",
            rule_ids().join(", ")
        )
        .into()),
    }
}

fn lint_text(
    path: &Path,
    config: &CliConfig,
    findings: &mut Vec<FileDiagnostic>,
) -> Result<(), Box<dyn Error>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let options = ParseOptions {
        source_name: Some(path.display().to_string()),
        ..ParseOptions::default()
    };
    match parse(&text, &options) {
        Ok(parsed) => {
            findings.extend(file_diags(
                path,
                None,
                validate(&parsed.transcript, &config.rules),
            ));
        }
        Err(errors) => findings.extend(file_diags(path, None, errors)),
    }
    Ok(())
}

fn lint_textgrid(
    path: &Path,
    config: &CliConfig,
    findings: &mut Vec<FileDiagnostic>,
) -> Result<(), Box<dyn Error>> {
    let bytes = std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let doc = match read_textgrid(&bytes) {
        Ok(doc) => doc,
        Err(err) => {
            findings.extend(file_diags(
                path,
                None,
                vec![Diagnostic::new(
                    Severity::Error,
                    CONTAINER_RULE,
                    err.to_string(),
                    0,
                    (0, 0),
                )],
            ));
            return Ok(());
        }
    };
    for tier in &doc.tiers {
        let mut segments = Vec::new();
        // ordinal (among non-empty intervals) of each assembled segment, so
        // findings stay attributable when some intervals fail to parse
        let mut ordinal_of_segment = Vec::new();
        let mut tier_findings = Vec::new();
        for (ordinal, interval) in tier
            .intervals
            .iter()
            .filter(|iv| !iv.is_empty())
            .enumerate()
        {
            match parse_segment_text(&interval.text) {
                Ok((mut segment, _)) => {
                    segment.time_range = Some((interval.xmin, interval.xmax));
                    segments.push(segment);
                    ordinal_of_segment.push(ordinal);
                }
                Err(mut diagnostic) => {
                    diagnostic.location.segment = ordinal;
                    tier_findings.push(diagnostic);
                }
            }
        }
        let transcript = Transcript::new(segments);
        for mut diagnostic in validate(&transcript, &config.rules) {
            diagnostic.location.segment = ordinal_of_segment[diagnostic.location.segment];
            tier_findings.push(diagnostic);
        }
        tier_findings.sort_by_key(|d| (d.location.segment, d.location.span));
        findings.extend(file_diags(path, Some(&tier.name), tier_findings));
    }
    Ok(())
}
