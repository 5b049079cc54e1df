use std::path::PathBuf;

use spinpair_core::PhaseError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration for `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for configuration, 3 for numerics, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numeric(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

impl From<PhaseError> for CliError {
    fn from(e: PhaseError) -> Self {
        match e {
            PhaseError::NonPositiveTemperature(_) => CliError::config("kt", e.to_string()),
            PhaseError::InvalidGrid { .. } => CliError::config("grid", e.to_string()),
            PhaseError::Model(m) => CliError::config("j", m.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
