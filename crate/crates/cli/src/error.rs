use std::path::PathBuf;

use faa_core::SolveError;
use thiserror::Error;

pub const EXIT_CONVERGED: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_MAX_ITERS: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;
/// Solver breakdown or I/O failure after a valid configuration was accepted.
pub const EXIT_RUNTIME: i32 = 4;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("solver error: {0}")]
    Solve(SolveError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl HarnessError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Solve(_) | Self::Io { .. } => EXIT_RUNTIME,
        }
    }
}

impl From<SolveError> for HarnessError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::InvalidConfig(msg) => Self::Config(msg),
            other => Self::Solve(other),
        }
    }
}
