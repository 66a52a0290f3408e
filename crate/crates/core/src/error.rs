use std::io;

use thiserror::Error;

/// Errors produced by the library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the range where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative numeric procedure failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A code file or other text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
