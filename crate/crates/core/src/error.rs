use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("generator tables differ")]
    TableMismatch,

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unsupported parity: {0}")]
    UnsupportedParity(String),

    #[error("unsupported case: {0}")]
    UnsupportedCase(String),

    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeBound { degree: u32, bound: u32 },

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("model mismatch: {0}")]
    ModelMismatch(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
