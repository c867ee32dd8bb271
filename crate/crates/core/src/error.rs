use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has {len} entries but shape {rows}x{cols}")]
    ShapeEntryMismatch {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("operation needs a non-empty matrix")]
    Empty,
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not Hermitian: relative defect {defect:.3e}")]
    NotHermitian { defect: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("dimension {dim} exceeds the limit of {limit}")]
    DimensionOverflow { dim: usize, limit: usize },
    #[error("invalid projection family: {0}")]
    InvalidProjections(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("Schatten exponent must be >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("matrix diagonal must vanish, entry {index} is {value:.3e}")]
    NonZeroDiagonal { index: usize, value: f64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
