use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("state is not normalized: squared norm is {0}")]
    NotNormalized(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("unsupported dimension {0} (allowed 1..={max})", max = crate::hilbert::MAX_DIM)]
    UnsupportedDimension(usize),

    #[error("operator is not a projector: {0}")]
    NotProjector(&'static str),

    #[error("invalid PVM: {0}")]
    InvalidPvm(String),

    #[error("invalid density operator: {0}")]
    InvalidDensity(&'static str),

    #[error("trace is not real: imaginary part {0}")]
    NonRealTrace(String),

    #[error("invalid choice {0}")]
    InvalidChoice(u8),

    #[error("invalid outcome {0}")]
    InvalidOutcome(usize),

    #[error("conditional undefined: post-selection probability is zero for C={0}")]
    UndefinedConditional(u8),

    #[error("invalid behavior: {0}")]
    InvalidBehavior(String),

    #[error("invalid choice set: {0}")]
    InvalidChoiceSet(String),

    #[error("unknown node {0:?}")]
    UnknownNode(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid structural causal model: {0}")]
    InvalidScm(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
