use thiserror::Error;

/// Errors produced by construction and validation of the domain types.
///
/// All computational operations are total once their inputs validate, so
/// errors here almost always point at malformed input data.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: expected {expected} entries, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("negative weight in {what} at index {index}")]
    NegativeWeight { what: &'static str, index: usize },
    #[error("chain is not strictly nested at position {0}")]
    ChainNotNested(usize),
    #[error("chain does not cover the whole point set")]
    ChainNotFull,
    #[error("core sets are not totally ordered by inclusion")]
    BallsNotOrdered,
    #[error("point index {0} out of range (space has {1} points)")]
    PointIndex(usize, usize),
    #[error("chain index {0} out of range (chain has {1} sets)")]
    ChainIndex(usize, usize),
    #[error("invalid exponents: {0}")]
    InvalidExponents(String),
    #[error("eta is singular against mu on a tau-reachable set; the best constant is infinite")]
    SingularEta,
    #[error("value must be finite: {0}")]
    NotFinite(String),
    #[error("distance matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("distance matrix has a nonzero diagonal entry at {0}")]
    NonzeroDiagonal(usize),
    #[error("negative distance at ({0},{1})")]
    NegativeDistance(usize, usize),
    #[error("triangle inequality fails for points ({0},{1},{2})")]
    TriangleInequality(usize, usize, usize),
    #[error("field `{field}`: {msg}")]
    Validation { field: String, msg: String },
    #[error("problem file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            msg: msg.into(),
        }
    }
}
