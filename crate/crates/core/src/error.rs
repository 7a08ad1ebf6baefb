use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input shape mismatch: expected {expected}, got {actual}")]
    InputShape { expected: usize, actual: usize },

    #[error("activation cache does not match network: {0}")]
    InvalidCache(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("step called after episode end; call reset first")]
    StepAfterDone,

    #[error("good-trajectory buffer is empty")]
    BufferNotReady,

    #[error("invalid config field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("unsupported environment for this operation: {0}")]
    UnsupportedEnv(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("malformed {what}: {reason}")]
    Format { what: &'static str, reason: String },

    #[error("io error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
