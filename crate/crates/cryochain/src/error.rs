use std::io;
use std::path::PathBuf;

use cryochain_core::Error as CoreError;

/// Failure of a command, carrying the process exit status it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(String),
    /// A numerical precondition of a model was violated.
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("I/O error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Precondition(_) | CoreError::Decision(_) => {
                CliError::Numerical(e.to_string())
            }
            CoreError::Domain(_) | CoreError::Input(_) | CoreError::Unsupported(_) => {
                CliError::Config(e.to_string())
            }
        }
    }
}
