use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("step {step}: face index {index} out of range ({faces} inner faces)")]
    FaceIndexOutOfRange {
        step: usize,
        index: usize,
        faces: usize,
    },

    #[error("the starting triangle has no associated tree")]
    NoTree,

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("coordinate {coordinate} is zero, no golden-ratio exponent certifies it")]
    UndefinedExponent { coordinate: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("{what}: size {size} exceeds the enumeration guard {limit}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("oracle disagreement: {0}")]
    OracleMismatch(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            message: err.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
