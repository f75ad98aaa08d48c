//! Tool configuration: a flat key-value file, overridable by flags.
//!
//! ```text
//! # stutter-annot config
//! rule.W003 = off
//! rule.I001 = on
//! gap-threshold = 0.75
//! redaction = placeholder:NAME
//! format = json
//! ```
//!
//! The path comes from `--config` or the `STUTTER_ANNOT_CONFIG` environment
//! variable. Unknown keys and unknown rule ids are rejected at startup.

use crate::output::OutputFormat;
use std::fmt;
use std::path::Path;
use stutter_annot_core::transforms::RedactionPolicy;
use stutter_annot_core::RuleSet;

#[derive(Debug, Clone)]
pub struct CliConfig {
    pub rules: RuleSet,
    pub gap_threshold: f64,
    pub redaction: Option<RedactionPolicy>,
    pub format: OutputFormat,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            rules: RuleSet::default_rules(),
            gap_threshold: 0.5,
            redaction: None,
            format: OutputFormat::Text,
        }
    }
}

#[derive(Debug)]
pub struct ConfigError {
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(message: impl Into<String>) -> ConfigError {
    ConfigError {
        message: message.into(),
    }
}

impl CliConfig {
    pub fn load(path: &Path) -> Result<CliConfig, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| err(format!("cannot read config {}: {e}", path.display())))?;
        CliConfig::parse(&text).map_err(|e| err(format!("{}: {}", path.display(), e.message)))
    }

    pub fn parse(text: &str) -> Result<CliConfig, ConfigError> {
        let mut config = CliConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim();
            if let Some(rule_id) = key.strip_prefix("rule.") {
                let result = match value {
                    "on" | "true" => config.rules.enable(rule_id),
                    "off" | "false" => config.rules.disable(rule_id),
                    other => {
                        return Err(err(format!(
                            "line {}: rule toggle must be on/off, found {other:?}",
                            lineno + 1
                        )))
                    }
                };
                result.map_err(|e| err(format!("line {}: {e}", lineno + 1)))?;
                continue;
            }
            match key {
                "gap-threshold" => {
                    let threshold: f64 = value.parse().map_err(|_| {
                        err(format!("line {}: bad gap-threshold {value:?}", lineno + 1))
                    })?;
                    if threshold.is_nan() || threshold <= 0.0 {
                        return Err(err(format!(
                            "line {}: gap-threshold must be positive",
                            lineno + 1
                        )));
                    }
                    config.gap_threshold = threshold;
                }
                "redaction" => {
                    config.redaction = parse_redaction(value)
                        .map_err(|m| err(format!("line {}: {m}", lineno + 1)))?;
                }
                "format" => {
                    config.format = value
                        .parse()
                        .map_err(|m: String| err(format!("line {}: {m}", lineno + 1)))?;
                }
                other => {
                    return Err(err(format!(
                        "line {}: unknown config key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(config)
    }
}

fn parse_redaction(value: &str) -> Result<Option<RedactionPolicy>, String> {
    if value == "none" {
        return Ok(None);
    }
    if value == "hash" {
        return Ok(Some(RedactionPolicy::hash()));
    }
    if value == "drop" {
        return Ok(Some(RedactionPolicy::drop_chunk()));
    }
    if let Some(token) = value.strip_prefix("placeholder:") {
        return RedactionPolicy::placeholder(token)
            .map(Some)
            .map_err(|e| e.to_string());
    }
    Err(format!(
        "bad redaction {value:?}; expected none, hash, drop, or placeholder:<token>"
    ))
}
