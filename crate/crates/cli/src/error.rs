//! Errors of the command-line harness and their exit codes.

use std::path::PathBuf;

use thiserror::Error;

/// Failure of a CLI command.
#[derive(Debug, Error)]
pub enum CliError {
    /// The configuration file or a command-line value is malformed or out of range.
    #[error("config error: {0}")]
    Config(String),
    /// A numeric routine failed.
    #[error(transparent)]
    Core(#[from] staircase_core::Error),
    /// Reading or writing a file failed.
    #[error("i/o error on {path}: {source}")]
    Io {
        /// File being read or written.
        path: PathBuf,
        /// Underlying error.
        #[source]
        source: std::io::Error,
    },
    /// Writing to standard output failed.
    #[error("i/o error: {0}")]
    Stdout(#[from] std::io::Error),
    /// Serializing the JSON report failed.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    /// Writing CSV output failed.
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Exit code when every residual is within its budget.
pub const EXIT_OK: i32 = 0;
/// Exit code when a residual exceeds its budget or a computation fails.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for configuration errors.
pub const EXIT_CONFIG: i32 = 2;

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Core(staircase_core::Error::InvalidSpec(_)) => EXIT_CONFIG,
            _ => EXIT_FAILURE,
        }
    }
}

/// Result alias of the harness.
pub type Result<T> = std::result::Result<T, CliError>;
