use thiserror::Error;

/// Errors raised across the simulator, the algorithms and the prior estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller passed an argument outside the operation's domain.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// An input failed a numerical or structural check (non-unitary matrix, non-eigenstate, ...).
    #[error("validation failed: {0}")]
    Validation(String),
    /// A requested register or enumeration exceeds a configured cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// A randomized procedure exhausted its retry cap.
    #[error("retry cap exhausted: {0}")]
    Failure(String),
    /// A conditional was requested against a zero or error-dominated denominator.
    #[error("conditional undefined: {0}")]
    UndefinedConditional(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
