//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
///
/// `Parse` is reserved for descriptor / file-format errors so the CLI can
/// map it to a distinct exit code; everything else is a domain error.
#[derive(Debug, Error)]
pub enum Error {
    /// A descriptor or input file failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// A precondition of an operation was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested operation is not supported for this group kind.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
