use thiserror::Error;

/// Crate-wide error type.
///
/// The variants mirror how callers are expected to react: `Model` and
/// `Domain` are invalid-input rejections, `NoConvergence` carries retry
/// guidance from iterative numerics, `NeedsData` asks for caller-supplied
/// data that the library refuses to guess, and `Internal` flags a broken
/// internal invariant (always a bug, never a user error).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Structurally invalid model data (bad surface, mismatched lengths,
    /// contradictory descriptor fields).
    #[error("model error: {0}")]
    Model(String),

    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative solve failed; the message includes retry guidance.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// The decision requires data only the caller can supply.
    #[error("needs data: {0}")]
    NeedsData(String),

    /// Two routes that must agree disagreed, or a structural invariant broke.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn model(msg: impl Into<String>) -> Self {
        Error::Model(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn no_convergence(msg: impl Into<String>) -> Self {
        Error::NoConvergence(msg.into())
    }
    pub fn needs_data(msg: impl Into<String>) -> Self {
        Error::NeedsData(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
