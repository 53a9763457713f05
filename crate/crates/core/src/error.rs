use thiserror::Error;

/// Errors raised by the algebra kernel and the realization algorithms.
///
/// Variants split into input errors (bad data from the caller) and scope
/// errors (a configured cap or an unsupported input shape was hit). Scope
/// errors never stand in for a wrong answer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),
    #[error("vector is not primitive: {0}")]
    NotPrimitive(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("scope cap `{cap}` exceeded (limit {limit}); raise it with {flag}")]
    CapExceeded {
        cap: &'static str,
        limit: usize,
        flag: &'static str,
    },
    #[error("decomposition incomplete: {0}")]
    DecompositionIncomplete(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("sampling failed: {0}")]
    Sampling(String),
}

impl Error {
    /// True for errors that signal a hard scope limit rather than bad input.
    pub fn is_scope(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. }
                | Error::DecompositionIncomplete(_)
                | Error::Unsupported(_)
                | Error::Sampling(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
