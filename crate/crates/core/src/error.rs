use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {requested} outside [1, {ceiling}]")]
    Size { requested: usize, ceiling: usize },

    #[error("basis index {index} out of bounds for dimension {dim}")]
    Bounds { index: usize, dim: usize },

    #[error("value {value} outside [{min}, {max}]{}", at.map(|i| format!(" at index {i}")).unwrap_or_default())]
    Range {
        value: f64,
        min: f64,
        max: f64,
        at: Option<usize>,
    },

    #[error("code {code} exceeds encoding scale {scale}")]
    CodeRange { code: u32, scale: u32 },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
