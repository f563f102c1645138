use std::path::PathBuf;

use gtorsion_core::Error as CoreError;

/// Failure of a command, carrying the process exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid algebra spec: {0}")]
    Spec(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl RunError {
    /// 2 for parse and usage errors, 3 for algebraic preconditions, 4 for
    /// numerical conditioning, 1 for IO.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Read { .. } | RunError::Write { .. } => 1,
            RunError::Spec(_) | RunError::Config(_) => 2,
            RunError::Precondition(_) => 3,
            RunError::Core(e) if e.is_conditioning() => 4,
            RunError::Core(CoreError::DegenerateKilling { .. }) => 3,
            RunError::Core(_) => 2,
        }
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;
