//! Exit-code discipline: 0 success, 1 domain/validation failure, 2
//! malformed input or usage. Every failure prints one machine-parseable
//! JSON line to stderr.

use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or unparseable input: exit 2.
    Malformed(String),
    /// A domain or validation failure from the toolkit: exit 1.
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Malformed(_) => ExitCode::from(2),
            CliError::Domain(_) => ExitCode::from(1),
        }
    }

    pub fn stderr_line(&self) -> String {
        let (kind, message) = match self {
            CliError::Malformed(m) => ("malformed_input", m),
            CliError::Domain(m) => ("domain", m),
        };
        serde_json::json!({"error": {"kind": kind, "message": message}}).to_string()
    }
}

impl From<vgroove::Error> for CliError {
    fn from(err: vgroove::Error) -> Self {
        CliError::Domain(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Malformed(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Malformed(err.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::Malformed(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
