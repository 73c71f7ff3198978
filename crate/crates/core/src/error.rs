use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("shape is unbounded: {0}")]
    Unbounded(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("shape chain mismatch at link {index}: {reason}")]
    ShapeChain { index: usize, reason: String },

    #[error("singular differential at {point:?}")]
    SingularDifferential { point: Vec<f64> },

    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("invalid claim: {0}")]
    Claim(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn hypothesis(reason: impl Into<String>) -> Self {
        Self::Hypothesis(reason.into())
    }

    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }
}
