use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coefficient ring mismatch")]
    RingMismatch,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not a unit")]
    NotAUnit,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("type error: {0}")]
    Type(String),
    #[error("form is not in the log part: {0}")]
    NotInLogPart(String),
    #[error("no refinement at level {level}: {msg}")]
    NoRefinement { level: u32, msg: String },
    #[error("size clamp exceeded: {0}")]
    SizeClamp(String),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
