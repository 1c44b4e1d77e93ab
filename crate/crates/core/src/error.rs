use thiserror::Error;

/// Identifies one block of a clique tree: a maximal clique or a separator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockId {
    Clique(usize),
    Separator(usize),
}

impl std::fmt::Display for BlockId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlockId::Clique(k) => write!(f, "clique {k}"),
            BlockId::Separator(k) => write!(f, "separator {k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("pivot {0} is numerically zero")]
    SingularPivot(usize),
    #[error("matrix is numerically singular")]
    Singular,
    #[error("determinant is not positive")]
    NonPositiveDeterminant,
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("ordering is not a permutation of 0..{0}")]
    InvalidOrdering(usize),
    #[error("pattern is not chordal (chordless cycle {cycle:?})")]
    NotChordal { cycle: Vec<usize> },
    #[error("pattern is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("staircase blocks {0} and {1} do not overlap")]
    NonOverlapping(usize, usize),
    #[error("separator {nodes:?} has a singular principal block")]
    SingularSeparator { nodes: Vec<usize> },
    #[error("{block} on nodes {nodes:?} is singular")]
    SingularBlock { block: BlockId, nodes: Vec<usize> },
    #[error("matrix is not unit upper triangular")]
    NotUnitTriangular,
    #[error("{} entries lie off the chordal pattern", entries.len())]
    PatternViolation { entries: Vec<(usize, usize, f64)> },
    #[error("position ({0}, {1}) is unspecified")]
    Unspecified(usize, usize),
    #[error("symbol is not positive on the quadrature grid")]
    NotPositive,
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
