use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: inhomogeneous relation (term degrees {degrees:?})")]
    InhomogeneousRelation { line: usize, degrees: Vec<usize> },
    #[error("line {line}: relation degree {found} differs from N = {n}")]
    RelationDegree { line: usize, found: usize, n: usize },
    #[error("line {line}, column {column}: unknown generator `{name}`")]
    UnknownGenerator {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("intersection of an empty family")]
    EmptyIntersection,
    #[error("invalid bimodule: {0}")]
    InvalidBimodule(String),
    #[error("slice outside the computed window: {0}")]
    Truncated(String),
    #[error("unsupported coefficient pairing: {0}")]
    UnsupportedPairing(String),
    #[error("not closed: {0}")]
    NotClosed(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
