use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A mathematically undefined operation, such as inverting zero or a
    /// singular matrix.
    #[error("domain error: {0}")]
    Domain(String),

    /// Arguments that violate an operation's preconditions.
    #[error("usage error: {0}")]
    Usage(String),

    /// A construction step whose machine check failed.
    #[error("consistency check failed at step `{step}`: {detail}")]
    Consistency { step: String, detail: String },

    /// The requested instance is larger than the enumeration guard allows.
    #[error("size guard: {0}")]
    SizeGuard(String),

    /// Malformed codeword file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn consistency(step: &str, detail: impl Into<String>) -> Self {
        Error::Consistency {
            step: step.to_string(),
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
