use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("universe mismatch: operands are defined over different variable sets")]
    UniverseMismatch,

    /// The set representation would need more nodes than the configured cap.
    #[error("multiplicity cap exceeded: total multiplicity {total} > cap {cap}")]
    CapExceeded { total: String, cap: u64 },

    #[error("{what} supports at most {limit} variables, got {n}")]
    LimitExceeded {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    /// The input does not have the syntactic shape an operation requires.
    #[error("form error: {0}")]
    Form(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    /// Malformed input file (CSV, instance, constraint file).
    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}
