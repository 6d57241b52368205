use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element {0} is not in the ground set")]
    OutsideGround(usize),
    #[error("element {0} appears more than once")]
    DuplicateElement(usize),
    #[error("cannot contract a dependent set")]
    DependentContraction,
    #[error("ground sets overlap on element {0}")]
    OverlappingGrounds(usize),
    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("instance too large for exhaustive search: {size} > {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("trace does not match instance: {0}")]
    TraceMismatch(String),
    #[error("degenerate instance: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matroid kind `{0}` has no file descriptor")]
    NotSerializable(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
