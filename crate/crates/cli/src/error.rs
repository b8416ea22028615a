use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::report::RunReport;

/// Process exit statuses.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INVALID_CONFIG: i32 = 2;
    pub const DIVERGED: i32 = 3;
    pub const IO_FAILURE: i32 = 4;
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct ConfigError(String);

impl ConfigError {
    pub fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

impl From<lv_core::Error> for ConfigError {
    fn from(e: lv_core::Error) -> Self {
        Self(e.to_string())
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    /// Some trajectory overflowed; outputs were written with a `.partial` suffix.
    #[error("trajectory diverged at step {step}; partial outputs written")]
    Diverged { step: usize, report: Box<RunReport> },

    #[error("analysis failed: {0}")]
    Analysis(#[from] lv_core::Error),
}

impl RunError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        RunError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => exit::INVALID_CONFIG,
            RunError::Io { .. } => exit::IO_FAILURE,
            RunError::Diverged { .. } => exit::DIVERGED,
            RunError::Analysis(_) => exit::INVALID_CONFIG,
        }
    }
}
