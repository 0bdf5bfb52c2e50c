use std::path::PathBuf;

use thiserror::Error;

/// Process exit status for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Usage = 1,
    VerificationFailed = 2,
    Numeric = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] wernerlike::Error),

    #[error("{0}")]
    Usage(String),

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("verification failed: max relative residual {residual:.3e} (threshold {threshold:.1e}), {failures} failure rows")]
    Verification { residual: f64, threshold: f64, failures: usize },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_status(&self) -> ExitStatus {
        use wernerlike::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } => ExitStatus::Usage,
            CliError::Verification { .. } => ExitStatus::VerificationFailed,
            CliError::Core(e) => match e {
                E::Domain(_) | E::Contract(_) | E::Parse(_) => ExitStatus::Usage,
                E::Numeric { .. } | E::NotConverged { .. } | E::Degenerate(_) | E::Bracket { .. } => {
                    ExitStatus::Numeric
                }
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
