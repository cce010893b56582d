use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input that has no well-defined geometry (all-zero polynomial, coincident centers, ...).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A curve file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A caller-supplied argument is out of its valid domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Internal state no longer satisfies a structural invariant of the grid or sweep.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
