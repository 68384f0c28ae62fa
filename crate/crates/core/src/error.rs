use thiserror::Error;

/// Errors raised by the solvers and constructors of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} exceeds the configured cap of {cap}; {hint}")]
    Capacity {
        what: String,
        cap: u64,
        hint: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn capacity(what: impl Into<String>, cap: u64, hint: impl Into<String>) -> Self {
        Error::Capacity {
            what: what.into(),
            cap,
            hint: hint.into(),
        }
    }

    pub(crate) fn needs_truncation(op: &str) -> Self {
        Error::Domain(format!(
            "{op} requires finite distances; apply truncate_space first"
        ))
    }
}
