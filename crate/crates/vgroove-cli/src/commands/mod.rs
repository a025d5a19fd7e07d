//! Subcommand implementations.

pub mod budget;
pub mod design;
pub mod fit_rates;
pub mod plan_etch;
pub mod recipe_cmd;
pub mod reproduce;
pub mod simulate_etch;
pub mod trace;

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use crate::errors::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Shared context: artifact directory, stdout format, and the global
/// --config path (interpreted per subcommand).
pub struct Ctx {
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub config: Option<PathBuf>,
}

impl Ctx {
    /// The global --config path, required by this subcommand.
    pub fn require_config(&self, subcommand: &str) -> CliResult<&Path> {
        self.config
            .as_deref()
            .ok_or_else(|| CliError::Malformed(format!("{subcommand} needs --config <json>")))
    }

    /// Write an artifact under the output directory, creating it first.
    /// Nothing is ever written anywhere else.
    pub fn write_artifact(&self, name: &str, content: &str) -> CliResult<PathBuf> {
        std::fs::create_dir_all(&self.out_dir)?;
        let path = self.out_dir.join(name);
        std::fs::write(&path, content)?;
        Ok(path)
    }

    /// Serialize a result record in the requested format, print it to
    /// stdout, and store it as an artifact.
    pub fn emit<T: Serialize>(&self, stem: &str, value: &T) -> CliResult<()> {
        let (name, text) = match self.format {
            OutputFormat::Json => {
                let mut text = serde_json::to_string_pretty(value)?;
                text.push('\n');
                (format!("{stem}.json"), text)
            }
            OutputFormat::Csv => (format!("{stem}.csv"), to_flat_csv(value)?),
        };
        print!("{text}");
        self.write_artifact(&name, &text)?;
        Ok(())
    }
}

/// Flatten a JSON-serializable record into `key,value` CSV rows with
/// dotted paths for nesting.
fn to_flat_csv<T: Serialize>(value: &T) -> CliResult<String> {
    let json = serde_json::to_value(value)?;
    let mut rows = Vec::new();
    flatten("", &json, &mut rows);
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{k},{v}\n"));
    }
    Ok(out)
}

fn flatten(prefix: &str, value: &serde_json::Value, rows: &mut Vec<(String, String)>) {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, rows);
            }
        }
        serde_json::Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, rows);
            }
        }
        serde_json::Value::String(s) => rows.push((prefix.to_string(), s.replace(',', ";"))),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

/// Read a whole file with a path-qualified error.
pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
}

/// Parse a JSON file with a path-qualified error.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read_file(path)?)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
}
