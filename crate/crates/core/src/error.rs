use thiserror::Error;

/// Errors surfaced by the library. Numeric checks that merely fail report a
/// `pass = false` flag instead of an error.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("inconsistent factorization: {0}")]
    Factorization(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("linear program is infeasible")]
    Infeasible,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
