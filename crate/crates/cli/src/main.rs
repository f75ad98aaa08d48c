//! `stutter-annot`: batch companion for stuttered-speech annotation work:
//! lint annotation files, convert between renderings, diff annotators,
//! compute agreement statistics, and move data in and out of Praat
//! TextGrids.
//!
//! Exit codes: 0 clean, 1 warnings or differences found, 2 data errors
//! (parse failures, malformed files), 3 usage, configuration, or I/O
//! failures.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use commands::agree::{AgreeArgs, LabelMode, Metric};
use commands::convert::{ConvertArgs, ConvertTarget};
use commands::diff::DiffArgs;
use commands::lint::LintArgs;
use commands::textgrid::{ExportArgs, GaplintArgs, ImportArgs};
use commands::InputKind;
use config::CliConfig;
use output::OutputFormat;
use std::error::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "stutter-annot",
    version,
    about = "Toolkit for stuttered-speech annotation files"
)]
struct Cli {
    /// Config file (default: $STUTTER_ANNOT_CONFIG if set)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Report format
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Force input interpretation instead of dispatching on file extension
    #[arg(long, global = true, value_enum)]
    input_format: Option<InputKind>,

    /// Exit 0 when only warnings were found
    #[arg(long, global = true)]
    quiet_warnings: bool,

    /// Enable a lint rule (repeatable)
    #[arg(long, global = true, value_name = "RULE")]
    enable_rule: Vec<String>,

    /// Disable a lint rule (repeatable)
    #[arg(long, global = true, value_name = "RULE")]
    disable_rule: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check annotation files against the markup rules
    Lint {
        paths: Vec<PathBuf>,
        /// Print the reasoning behind a rule and exit
        #[arg(long, value_name = "RULE")]
        explain: Option<String>,
    },
    /// Render an annotation file as verbatim text, semantic text, an event
    /// table, or the JSON AST
    Convert {
        path: PathBuf,
        #[arg(long, value_enum)]
        to: ConvertTarget,
        /// Tier to read when the input is a TextGrid
        #[arg(long, default_value = "annotation")]
        tier: String,
        /// Apply the configured redaction policy before rendering
        #[arg(long)]
        redact: bool,
    },
    /// Compare two annotations of the same audio
    Diff {
        path_a: PathBuf,
        path_b: PathBuf,
        /// Tier to read when an input is a TextGrid
        #[arg(long, default_value = "annotation")]
        tier: String,
    },
    /// Agreement statistics across two or more annotations
    Agree {
        paths: Vec<PathBuf>,
        #[arg(long, value_enum)]
        metric: Option<Metric>,
        #[arg(long, value_enum, default_value = "clip")]
        labels: LabelMode,
        /// Also emit majority-vote labels (odd rater count required)
        #[arg(long)]
        majority: bool,
        /// Tier to read when an input is a TextGrid
        #[arg(long, default_value = "annotation")]
        tier: String,
    },
    /// Praat TextGrid import, export, and silent-gap lint
    Textgrid {
        #[command(subcommand)]
        action: TextgridAction,
    },
}

#[derive(Subcommand)]
enum TextgridAction {
    /// Extract a tier into a plain-text annotation file plus a `.times`
    /// sidecar
    Import {
        path: PathBuf,
        #[arg(long, default_value = "annotation")]
        tier: String,
        #[arg(short, long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Build a TextGrid from an annotation file and its `.times` sidecar
    Export {
        path: PathBuf,
        /// Timestamp sidecar (default: `<path>.times`)
        #[arg(long, value_name = "FILE")]
        times: Option<PathBuf>,
        #[arg(long)]
        xmin: Option<f64>,
        #[arg(long)]
        xmax: Option<f64>,
        #[arg(short, long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Report long silent spans that may hide quiet stuttering events
    Gaplint {
        path: PathBuf,
        #[arg(long)]
        tier: String,
        /// Minimum gap duration in seconds (default from config, 0.5)
        #[arg(long)]
        threshold: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("stutter-annot: {err}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Box<dyn Error>> {
    let mut config = match &cli.config {
        Some(path) => CliConfig::load(path)?,
        None => match std::env::var_os("STUTTER_ANNOT_CONFIG") {
            Some(path) => CliConfig::load(PathBuf::from(path).as_path())?,
            None => CliConfig::default(),
        },
    };
    for rule in &cli.enable_rule {
        config.rules.enable(rule)?;
    }
    for rule in &cli.disable_rule {
        config.rules.disable(rule)?;
    }
    let format = cli.format.unwrap_or(config.format);

    match cli.command {
        Command::Lint { paths, explain } => commands::lint::run(
            LintArgs {
                paths,
                explain,
                input_format: cli.input_format,
                quiet_warnings: cli.quiet_warnings,
            },
            &config,
            format,
        ),
        Command::Convert {
            path,
            to,
            tier,
            redact,
        } => commands::convert::run(
            ConvertArgs {
                path,
                to,
                tier,
                input_format: cli.input_format,
                redact,
            },
            &config,
            format,
        ),
        Command::Diff {
            path_a,
            path_b,
            tier,
        } => commands::diff::run(
            DiffArgs {
                path_a,
                path_b,
                tier,
                input_format: cli.input_format,
            },
            format,
        ),
        Command::Agree {
            paths,
            metric,
            labels,
            majority,
            tier,
        } => commands::agree::run(
            AgreeArgs {
                paths,
                metric,
                labels,
                majority,
                tier,
                input_format: cli.input_format,
            },
            format,
        ),
        Command::Textgrid { action } => match action {
            TextgridAction::Import { path, tier, out } => {
                commands::textgrid::run_import(ImportArgs { path, tier, out })
            }
            TextgridAction::Export {
                path,
                times,
                xmin,
                xmax,
                out,
            } => commands::textgrid::run_export(ExportArgs {
                path,
                times,
                xmin,
                xmax,
                out,
            }),
            TextgridAction::Gaplint {
                path,
                tier,
                threshold,
            } => commands::textgrid::run_gaplint(
                GaplintArgs {
                    path,
                    tier,
                    threshold,
                },
                &config,
                format,
            ),
        },
    }
}
