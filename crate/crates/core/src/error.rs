use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} outside table range 1..={n_max}")]
    OutOfRange { index: usize, n_max: usize },

    /// The root-of-unity oracle disagreed with integrality. This is a bug, not bad input.
    #[error("numeric oracle failure for c_{r}({n}): {detail}")]
    NumericOracleFailure { r: usize, n: usize, detail: String },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("{path}:{line}: {msg}")]
    Ingestion {
        path: PathBuf,
        line: u64,
        msg: String,
    },

    #[error("usage: {0}")]
    Usage(String),

    /// `--help` / `--version` text; not a failure.
    #[error("{0}")]
    Help(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Process exit status: 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Help(_) => 0,
            Error::Usage(_) => 2,
            _ => 1,
        }
    }
}
