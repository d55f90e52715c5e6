//! Plain-text signal files.
//!
//! One real per line. Lines starting with `#` carry whitespace-separated
//! `key=value` metadata (`dt=0.08 seed=7`). A single non-numeric first data
//! line is accepted as a CSV column name. `NaN` and infinities are rejected.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::CliError;
use crate::format::fmt_num;

#[derive(Debug, Clone, PartialEq)]
pub struct SignalFile {
    pub samples: Vec<f64>,
    pub metadata: BTreeMap<String, String>,
    pub column: Option<String>,
}

impl SignalFile {
    /// Sampling interval from the `dt` header key, if present.
    pub fn dt(&self) -> Result<Option<f64>, CliError> {
        match self.metadata.get("dt") {
            None => Ok(None),
            Some(raw) => match raw.parse::<f64>() {
                Ok(v) if v.is_finite() && v > 0.0 => Ok(Some(v)),
                _ => Err(CliError::Data(format!("invalid dt in header: {raw:?}"))),
            },
        }
    }
}

pub fn parse_signal(text: &str) -> Result<SignalFile, CliError> {
    let mut samples = Vec::new();
    let mut metadata = BTreeMap::new();
    let mut column = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            for token in rest.split_whitespace() {
                if let Some((k, v)) = token.split_once('=') {
                    metadata.insert(k.trim().to_string(), v.trim().to_string());
                }
            }
            continue;
        }
        if line.contains(',') {
            return Err(CliError::Data(format!(
                "line {}: expected a single column, got {line:?}",
                lineno + 1
            )));
        }
        match parse_value(line) {
            Some(v) => samples.push(v),
            None if samples.is_empty() && column.is_none() && is_column_name(line) => {
                column = Some(line.to_string());
            }
            None => {
                return Err(CliError::Data(format!(
                    "line {}: not a finite number: {line:?}",
                    lineno + 1
                )))
            }
        }
    }
    if samples.is_empty() {
        return Err(CliError::Data("signal contains no samples".into()));
    }
    Ok(SignalFile {
        samples,
        metadata,
        column,
    })
}

fn parse_value(token: &str) -> Option<f64> {
    token.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Column names must not look like (non-finite) numbers.
fn is_column_name(token: &str) -> bool {
    let lower = token.to_ascii_lowercase();
    let bare = lower.trim_start_matches(['+', '-']);
    token.parse::<f64>().is_err()
        && !matches!(bare, "nan" | "inf" | "infinity")
        && token.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
}

pub fn read_signal(path: &Path) -> Result<SignalFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_signal(&text).map_err(|e| match e {
        CliError::Data(msg) => CliError::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn render_signal(samples: &[f64], metadata: &[(&str, String)]) -> String {
    let mut out = String::with_capacity(samples.len() * 20);
    for (k, v) in metadata {
        out.push_str(&format!("# {k}={v}\n"));
    }
    for v in samples {
        out.push_str(&fmt_num(*v));
        out.push('\n');
    }
    out
}

pub fn write_signal(path: &Path, samples: &[f64], metadata: &[(&str, String)]) -> Result<(), CliError> {
    fs::write(path, render_signal(samples, metadata)).map_err(|e| CliError::io(path, e))
}
