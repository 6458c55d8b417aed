//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by pattern handling, training, recall, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// A pattern or weight set was used with a network of a different shape.
    #[error("architecture mismatch: expected {expected}, found {found}")]
    ArchMismatch { expected: String, found: String },

    /// A parameter is outside its documented domain.
    #[error("invalid parameter {name}: {message}")]
    InvalidParam { name: &'static str, message: String },

    /// Weight compilation was requested before any pattern was trained.
    #[error("counter state is empty: train at least one pattern before compiling")]
    EmptyCounters,

    /// A threshold search exhausted its evaluation budget.
    #[error("no convergence after {evals} evaluations (last load {last_p})")]
    NoConvergence { evals: usize, last_p: u32 },

    /// A fit or summary was requested on data that cannot support it.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Text serialization could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParam {
            name,
            message: message.into(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
