use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("component {component} has order sum {sum}, expected {expected}")]
    DegreeMismatch { component: usize, sum: i64, expected: i64 },
    #[error("component {component} has {legs} legs, at least 3 are required")]
    Unstable { component: usize, legs: usize },
    #[error("residue conditions force a nonzero residue to vanish")]
    EmptyIntersection,
    #[error("stratum is empty (dimension {0})")]
    EmptyStratum(i64),
    #[error("{legs} legs exceed the enumeration bound {bound}")]
    BoundExceeded { legs: usize, bound: usize },
    #[error("graph has a horizontal edge")]
    HorizontalEdge,
    #[error("class degree {degree} exceeds dimension {dim}")]
    DegreeOverflow { degree: i64, dim: i64 },
    #[error("integrand degree {degree} does not match dimension {dim}")]
    IntegrandDegree { degree: i64, dim: i64 },
    #[error("recursion depth exceeded")]
    RecursionDepth,
    #[error("tuple {0} does not satisfy INT")]
    NotInt(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
