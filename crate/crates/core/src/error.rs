use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates a stated inequality; the message names it.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed value for {flag}: {value:?} ({reason})")]
    Parse {
        flag: String,
        value: String,
        reason: String,
    },

    #[error("pole encountered: {0}")]
    Pole(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("tail bound not reached: {0}")]
    TailBound(String),

    #[error("truncation residual {residual:e} exceeds tolerance {tol:e}")]
    Truncation { residual: f64, tol: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
