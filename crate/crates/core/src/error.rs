use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A length or side that the transform cannot handle (odd, too small, not divisible).
    #[error("{0}")]
    Size(String),
    /// Two operands whose dimensions disagree.
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Range(String),
    /// Malformed PPM or WCT input.
    #[error("format error: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    /// The external JPEG2000 tool is not configured, missing, or failed.
    #[error("external codec unavailable: {0}")]
    Unavailable(String),
}

impl Error {
    /// Process exit code for the command-line tool: 1 for validation-type
    /// failures, 2 for I/O and format failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Format(_) | Error::Unavailable(_) => 2,
            Error::Size(_) | Error::Shape(_) | Error::Validation(_) | Error::Range(_) => 1,
        }
    }
}

pub(crate) fn shape_err(what: &str, expected: impl std::fmt::Debug, got: impl std::fmt::Debug) -> Error {
    Error::Shape(format!("{what}: expected {expected:?}, got {got:?}"))
}
