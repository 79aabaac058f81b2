use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grade overflow: {0} + {1} exceeds 6")]
    GradeOverflow(usize, usize),
    #[error("invalid grade {got}, expected {expected}")]
    Grade { got: usize, expected: String },
    #[error("invalid multi-index {0:?}: axes must be strictly increasing within 1..=6")]
    MultiIndex(Vec<usize>),
    #[error("degenerate form: {0}")]
    Degenerate(String),
    #[error("form is not primitive (max |omega ^ phi| coefficient = {residual})")]
    NotPrimitive { residual: f64 },
    #[error("classification failed: {0}")]
    Classification(String),
    #[error("not in O-: Q = {0} is not negative")]
    NotNegative(f64),
    #[error("invalid Lie algebra: {0}")]
    LieAlgebra(String),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("limit extraction failed: {0}")]
    Limit(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
