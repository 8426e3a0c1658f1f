use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration, flags or input files. Exit code 2.
    #[error("config error: {0}")]
    Config(String),

    /// A fit or estimator could not use the data. Exit code 4.
    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] cqie_core::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Degenerate(_) => 4,
            CliError::Core(e) if e.is_degenerate() => 4,
            CliError::Io { .. } | CliError::Core(_) => 3,
        }
    }
}

/// Re-labels core validation failures as configuration errors.
pub(crate) fn as_config(e: cqie_core::Error) -> CliError {
    match e {
        cqie_core::Error::Io(_) | cqie_core::Error::Infeasible(_) => CliError::Core(e),
        other => CliError::Config(other.to_string()),
    }
}
