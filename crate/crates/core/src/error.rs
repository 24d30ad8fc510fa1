//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates an operation precondition (probability out of
    /// range, odd grid dimension, empty fit window, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested evaluation leaves the numerically safe domain
    /// (imaginary square root, floating evaluation refused for p > 1/2 at
    /// large t, ...).
    #[error("numerical domain error: {0}")]
    NumericalDomain(String),

    /// A denominator Pochhammer factor of a terminating hypergeometric
    /// series hit zero before the series terminated.
    #[error("hypergeometric pole: denominator parameter reaches zero at term {term}")]
    Pole { term: usize },

    /// Malformed grid/trace file.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI: 1 I/O, 2 argument validation,
    /// 3 numerical domain.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 1,
            Error::InvalidParameter(_) | Error::Parse(_) => 2,
            Error::NumericalDomain(_) | Error::Pole { .. } => 3,
        }
    }
}
