use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input text or JSON.
    #[error("parse error: {0}")]
    Parse(String),
    /// Structurally incompatible operands (variable sets, bidegrees, shapes).
    #[error("mismatch: {0}")]
    Mismatch(String),
    /// A mathematical operation outside its domain (zero constant term, degenerate surface).
    #[error("math-domain error: {0}")]
    Domain(String),
    /// A documented precondition of an operation does not hold for the input.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An internal self-check failed; this indicates a bug.
    #[error("self-validation failed: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
