use thiserror::Error;

/// Errors shared by all layers of the kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("cardinality limit exceeded: {0}")]
    CardinalityLimit(String),
    #[error("result too large: {0}")]
    ResultTooLarge(String),
    #[error("assignment space too large: {0}")]
    SpaceTooLarge(String),
    #[error("empty family passed to a big inner operation")]
    EmptyFamily,
    #[error("argument is not up-closed: {0}")]
    NotUpClosed(String),
    #[error("argument is not univalent: {0}")]
    NotUnivalent(String),
    #[error("relation is not a multirelation (target is not a powerset type): {0}")]
    NotMultirelation(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    SyntaxError { line: usize, col: usize, msg: String },
    #[error("type error: {0}")]
    TypeError(String),
    #[error("unknown demo: {0}")]
    UnknownDemo(String),
}

pub type Result<T> = std::result::Result<T, Error>;
