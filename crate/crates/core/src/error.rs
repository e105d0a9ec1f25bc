use thiserror::Error;

/// Errors raised by the matrix, sign-pattern, tree and oracle routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not positive definite: pivot {pivot} at row {row} is below the floor {floor}")]
    NotPositiveDefinite { row: usize, pivot: f64, floor: f64 },

    #[error("matrix is singular to working precision at column {column}")]
    Singular { column: usize },

    #[error("iteration did not converge after {iterations} steps (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("matrix is not symmetric: max asymmetry {asymmetry:e} exceeds {allowed:e}")]
    Asymmetric { asymmetry: f64, allowed: f64 },

    #[error("sign matrix is not symmetric at ({row}, {col})")]
    AsymmetricSignMatrix { row: usize, col: usize },

    #[error("sign pattern is infeasible for an inverse doubly-nonnegative matrix")]
    InfeasiblePattern,

    #[error("graph is not a tree")]
    NotATree,

    #[error("leaf attachment destroys positive definiteness (Schur factor {factor:e})")]
    SchurNotPositiveDefinite { factor: f64 },

    #[error("dimension {n} exceeds the oracle limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("no pair found after {trials} trials")]
    NotFound { trials: usize },

    #[error("resampling budget of {budget} draws exhausted")]
    ResampleBudget { budget: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
