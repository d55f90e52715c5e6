use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the command-line front end, each mapped to an exit
/// code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("data: {0}")]
    Data(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("numerical: {0}")]
    NotConverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Io { .. } => 2,
            CliError::NotConverged(_) => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<spectral_jumps::Error> for CliError {
    fn from(e: spectral_jumps::Error) -> Self {
        match e {
            spectral_jumps::Error::NotConverged { .. } => CliError::NotConverged(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}
