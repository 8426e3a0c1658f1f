use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("time {t} outside schedule domain [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },

    #[error("engine mismatch: {0}")]
    EngineMismatch(String),

    #[error("system of {n} spins exceeds the dense oracle limit of {limit}")]
    SizeLimit { n: usize, limit: usize },

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("no phase transition inside the scanned range: {0}")]
    NoTransition(String),

    #[error("estimate is unbounded: {0}")]
    UnboundedEstimate(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    /// True for the fit/estimator failures that indicate unusable input data
    /// rather than a bug or I/O problem.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::Degenerate(_) | Error::NoTransition(_) | Error::UnboundedEstimate(_)
        )
    }
}
