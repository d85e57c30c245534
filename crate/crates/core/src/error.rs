use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed arguments: wrong dimension, non-atom where an atom is required, bad model file.
    #[error("invalid input: {0}")]
    Input(String),
    /// A point lies outside the set where the operation is defined (usually C°).
    #[error("domain error: {0}")]
    Domain(String),
    /// The model lacks the structure the operation needs (e.g. a Jordan product on a polyhedral cone).
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("singular element: {0}")]
    Singular(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Two independent computations disagree, or a numerical routine failed to converge.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
