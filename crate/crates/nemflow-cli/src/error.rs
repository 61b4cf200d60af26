//! Driver errors.

use std::path::Path;

use thiserror::Error;

/// Errors raised by the driver.
#[derive(Debug, Error)]
pub enum CliError {
    /// The configuration violates the schema.
    #[error("schema error: {0}")]
    Schema(String),

    /// A library call failed.
    #[error(transparent)]
    Model(#[from] nemflow::Error),

    /// File system failure.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Serialization failure.
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    /// An export was requested for an empty field.
    #[error("nothing to export: {0}")]
    Empty(&'static str),

    /// Invalid command-line input.
    #[error("invalid argument: {0}")]
    Argument(String),
}

impl CliError {
    /// Wraps an I/O error with its path.
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Short machine-readable kind.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Schema(_) => "schema",
            CliError::Model(_) => "model",
            CliError::Io { .. } => "io",
            CliError::Json(_) => "json",
            CliError::Empty(_) => "empty",
            CliError::Argument(_) => "argument",
        }
    }
}

/// Driver result alias.
pub type Result<T> = std::result::Result<T, CliError>;
