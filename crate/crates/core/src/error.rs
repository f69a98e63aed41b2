use thiserror::Error;

use crate::model::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure modes shared by every analysis stage.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: unknown symbols, bad parameters, parse failures.
    #[error("input error: {0}")]
    Input(String),
    /// An agent, environment or scenario violates its well-formedness rules.
    #[error("validation failed:\n{0}")]
    Validation(ValidationReport),
    /// A configured budget or cap was exhausted before the computation finished.
    #[error("resource limit: {0}")]
    Resource(String),
    /// The request is well-formed but not supported for this input.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An internal invariant failed. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
