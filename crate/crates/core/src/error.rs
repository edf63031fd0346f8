use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not a permutation: {0}")]
    NotBijective(String),

    #[error("invalid bond {{{0},{1}}}")]
    InvalidBond(usize, usize),

    #[error("partitions are not comparable under refinement")]
    NotComparable,

    #[error("invalid cycle-cutting: {0}")]
    InvalidCutting(String),

    #[error("bond set is not a tree over the partition: {0}")]
    NotATree(String),

    #[error("bond set is not a linear forest: {0}")]
    NotALinearForest(String),

    #[error("matrix is not in the admissible set: {0}")]
    InvalidMatrix(String),

    #[error("covariance is not positive semidefinite")]
    NotPositiveSemidefinite,

    #[error("partition {0:?} is not Eulerian (has an odd part)")]
    NotEulerian(Vec<usize>),

    #[error("pair is not a Goulden-Jackson pair: {0}")]
    NotGouldenJackson(String),

    #[error("constraint violation: {0}")]
    Constraint(String),

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("unexpected variable in polynomial: {0}")]
    UnexpectedVariable(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
