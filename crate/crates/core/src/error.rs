use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the numerical modules and the scenario layer.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation
    /// (negative time, `x` outside `[0, 1]`, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A structurally invalid argument (dimension mismatch, odd panel count, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A computation produced a non-finite value.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A scenario or sample file violates its schema.
    #[error("schema violation in {location}: field `{field}`: {message}")]
    Schema {
        location: String,
        field: String,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn schema(location: impl Into<String>, field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            location: location.into(),
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
