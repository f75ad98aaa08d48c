//! Report rendering in the three output formats.

use serde_json::json;
use std::str::FromStr;
use stutter_annot_core::agreement::{ConfusionTable, DiffReport, Kappa, TABLE_CODE_ORDER};
use stutter_annot_core::textgrid::GapFinding;
use stutter_annot_core::transforms::ClipLabels;
use stutter_annot_core::{Diagnostic, EventCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("bad format {other:?}; expected text, json, or csv")),
        }
    }
}

/// A diagnostic paired with the file (and possibly tier) it came from.
pub struct FileDiagnostic {
    pub file: String,
    pub tier: Option<String>,
    pub diagnostic: Diagnostic,
}

impl FileDiagnostic {
    fn place(&self) -> String {
        match &self.tier {
            Some(tier) => format!("{}:{}", self.file, tier),
            None => self.file.clone(),
        }
    }
}

pub fn render_diagnostics(diags: &[FileDiagnostic], format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => {
            let mut out = String::new();
            for d in diags {
                out.push_str(&format!("{}:{}\n", d.place(), d.diagnostic));
            }
            out
        }
        OutputFormat::Json => {
            let items: Vec<_> = diags
                .iter()
                .map(|d| {
                    json!({
                        "file": d.file,
                        "tier": d.tier,
                        "segment": d.diagnostic.location.segment,
                        "span": [d.diagnostic.location.span.0, d.diagnostic.location.span.1],
                        "severity": d.diagnostic.severity,
                        "rule_id": d.diagnostic.rule_id,
                        "message": d.diagnostic.message,
                    })
                })
                .collect();
            let doc = json!({ "kind": "diagnostics", "diagnostics": items });
            format!("{:#}\n", doc)
        }
        OutputFormat::Csv => {
            let mut out = String::from("file,tier,segment,start,end,severity,rule,message\n");
            for d in diags {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    csv_field(&d.file),
                    csv_field(d.tier.as_deref().unwrap_or("")),
                    d.diagnostic.location.segment,
                    d.diagnostic.location.span.0,
                    d.diagnostic.location.span.1,
                    d.diagnostic.severity,
                    d.diagnostic.rule_id,
                    csv_field(&d.diagnostic.message),
                ));
            }
            out
        }
    }
}

pub fn render_diff(report: &DiffReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => {
            if report.is_empty() {
                return String::new();
            }
            let width_a = report
                .entries
                .iter()
                .map(|e| e.a_markup.chars().count())
                .max()
                .unwrap_or(0)
                .max("annotation a".len());
            let mut out = format!(
                "{:<4} {:<width_a$}  {:<24}  differing codes\n",
                "#", "annotation a", "annotation b"
            );
            for (i, entry) in report.entries.iter().enumerate() {
                let codes = entry
                    .codes
                    .iter()
                    .map(|c| c.name())
                    .collect::<Vec<_>>()
                    .join(", ");
                out.push_str(&format!(
                    "{:<4} {:<width_a$}  {:<24}  {}\n",
                    i + 1,
                    entry.a_markup,
                    entry.b_markup,
                    codes
                ));
            }
            out
        }
        OutputFormat::Json => {
            let doc = json!({ "kind": "diff", "entries": report.entries });
            format!("{:#}\n", doc)
        }
        OutputFormat::Csv => {
            let mut out = String::from("position,a_markup,b_markup,codes\n");
            for entry in &report.entries {
                let codes = entry
                    .codes
                    .iter()
                    .map(|c| c.name())
                    .collect::<Vec<_>>()
                    .join(";");
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    entry.position,
                    csv_field(&entry.a_markup),
                    csv_field(&entry.b_markup),
                    codes
                ));
            }
            out
        }
    }
}

pub struct AgreeReport {
    pub statistic: &'static str,
    pub raters: usize,
    pub clips: usize,
    pub kappa: Vec<(EventCode, Kappa)>,
    pub confusion: Option<ConfusionTable>,
    pub majority: Option<Vec<ClipLabels>>,
}

pub fn render_agree(report: &AgreeReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => {
            let mut out = format!(
                "statistic: {} ({} raters, {} clips)\n\n{:<17} kappa\n",
                report.statistic, report.raters, report.clips, "code"
            );
            for (code, kappa) in &report.kappa {
                out.push_str(&format!("{:<17} {}\n", code.display_name(), kappa));
            }
            if let Some(confusion) = &report.confusion {
                out.push('\n');
                out.push_str(&confusion.render_text());
            }
            if let Some(majority) = &report.majority {
                out.push('\n');
                out.push_str(&labels_csv(majority));
            }
            out
        }
        OutputFormat::Json => {
            let kappa: serde_json::Map<String, serde_json::Value> = report
                .kappa
                .iter()
                .map(|(code, kappa)| (code.name().to_string(), json!(kappa.value())))
                .collect();
            let confusion = report.confusion.as_ref().map(|table| {
                TABLE_CODE_ORDER
                    .iter()
                    .map(|&code| {
                        let counts = table.counts(code);
                        json!({
                            "code": code.name(),
                            "fn": counts.false_negatives,
                            "fp": counts.false_positives,
                            "total": counts.disagreements(),
                            "percent": table.disagreement_percent_display(code)
                                .trim_end_matches('%'),
                        })
                    })
                    .collect::<Vec<_>>()
            });
            let doc = json!({
                "kind": "agreement",
                "statistic": report.statistic,
                "raters": report.raters,
                "clips": report.clips,
                "kappa": kappa,
                "confusion": confusion,
                "majority": report.majority,
            });
            format!("{:#}\n", doc)
        }
        OutputFormat::Csv => {
            let mut out = String::from("code,kappa\n");
            for (code, kappa) in &report.kappa {
                let value = match kappa.value() {
                    Some(v) => {
                        let rounded = (v * 1_000_000.0).round() / 1_000_000.0;
                        let rounded = if rounded == 0.0 { 0.0 } else { rounded };
                        format!("{rounded:.6}")
                    }
                    None => "not_defined".to_string(),
                };
                out.push_str(&format!("{},{}\n", code.name(), value));
            }
            if let Some(confusion) = &report.confusion {
                out.push('\n');
                out.push_str(&confusion.render_csv());
            }
            if let Some(majority) = &report.majority {
                out.push('\n');
                out.push_str(&labels_csv(majority));
            }
            out
        }
    }
}

pub fn labels_csv(labels: &[ClipLabels]) -> String {
    let mut out =
        String::from("segment,block,prolongation,sound_repetition,word_repetition,interjection\n");
    for l in labels {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            l.segment_index,
            u8::from(l.block),
            u8::from(l.prolongation),
            u8::from(l.sound_repetition),
            u8::from(l.word_repetition),
            u8::from(l.interjection),
        ));
    }
    out
}

pub fn render_gaps(findings: &[GapFinding], format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => {
            let mut out = String::new();
            for gap in findings {
                let before = gap.before.as_deref().unwrap_or("(start of tier)");
                let after = gap.after.as_deref().unwrap_or("(end of tier)");
                out.push_str(&format!(
                    "{}: silent span {}..{} ({:.3} s) between {:?} and {:?}\n",
                    gap.tier,
                    format_seconds(gap.start),
                    format_seconds(gap.end),
                    gap.duration(),
                    before,
                    after
                ));
            }
            out
        }
        OutputFormat::Json => {
            let items: Vec<_> = findings
                .iter()
                .map(|gap| {
                    json!({
                        "tier": gap.tier,
                        "start": gap.start,
                        "end": gap.end,
                        "duration": gap.duration(),
                        "before": gap.before,
                        "after": gap.after,
                    })
                })
                .collect();
            let doc = json!({ "kind": "gap_findings", "findings": items });
            format!("{:#}\n", doc)
        }
        OutputFormat::Csv => {
            let mut out = String::from("tier,start,end,duration,before,after\n");
            for gap in findings {
                out.push_str(&format!(
                    "{},{},{},{:.6},{},{}\n",
                    csv_field(&gap.tier),
                    format_seconds(gap.start),
                    format_seconds(gap.end),
                    gap.duration(),
                    csv_field(gap.before.as_deref().unwrap_or("")),
                    csv_field(gap.after.as_deref().unwrap_or("")),
                ));
            }
            out
        }
    }
}

pub fn format_seconds(value: f64) -> String {
    let mut s = format!("{value:.6}");
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    s
}

/// Minimal CSV quoting: fields with commas, quotes, or newlines get quoted,
/// quotes doubled.
pub fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
