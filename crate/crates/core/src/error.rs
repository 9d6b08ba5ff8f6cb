use thiserror::Error;

/// Errors raised while building operators or running checks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("basis size {size} exceeds configured cap {cap}")]
    BasisTooLarge { size: usize, cap: usize },

    #[error("no contraction table cell matches {0}")]
    InvalidCase(String),

    #[error("series expansion direction is ambiguous: {0}")]
    Prescription(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("config error at `{path}`: {msg}")]
    Config { path: String, msg: String },

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
