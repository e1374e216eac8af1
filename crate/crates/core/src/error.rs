use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates the precondition of the operation it was passed to.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A modulus that must be prime is composite.
    #[error("invalid parameter: modulus {0} is not prime")]
    NotPrime(u64),

    /// An element that must be a unit modulo q shares a factor with q.
    #[error("invalid parameter: {value} is not a unit modulo {modulus}")]
    NotUnit { value: u64, modulus: u64 },

    /// The requested work exceeds a configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
