use thiserror::Error;

/// Errors raised by grid construction, problem sampling and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: need at least 2 subdivisions per axis, got {n}")]
    InvalidGrid { n: usize },

    #[error("invalid grid dimension {0}: only 1 and 2 are supported")]
    InvalidDimension(usize),

    #[error("node {node:?} is not an interior node")]
    OutOfDomain { node: [usize; 2] },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("grid mismatch: fields live on different grids")]
    GridMismatch,

    #[error("field has {found} values but the grid has {expected} nodes")]
    FieldLength { expected: usize, found: usize },

    #[error("non-finite value at node {node:?}")]
    NonFinite { node: [usize; 2] },

    #[error("invalid problem at node {node:?}: {reason}")]
    InvalidProblem { node: [usize; 2], reason: String },

    #[error("boundary violation at node {node:?}: expected {expected}, found {found}")]
    BoundaryViolation {
        node: [usize; 2],
        expected: f64,
        found: f64,
    },

    #[error("field must vanish on the boundary, found {value} at node {node:?}")]
    NonZeroBoundary { node: [usize; 2], value: f64 },

    #[error("problem has no exact solution")]
    MissingExactSolution,

    #[error("oracle limited to {cap} interior nodes, problem has {interior}")]
    OracleTooLarge { interior: usize, cap: usize },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
