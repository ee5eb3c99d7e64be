use thiserror::Error;

/// Errors raised by quiver, representation, presentation and complex operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("quiver has an oriented cycle through vertex {0}")]
    OrientedCycle(String),

    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("dimension vector {0:?} has a negative entry")]
    NegativeDimension(Vec<i64>),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("representations live on different quivers")]
    QuiverMismatch,

    #[error("internal error: {0}")]
    Internal(String),

    #[error("could not split representation after {attempts} attempts (field too small or unlucky seed)")]
    SplitFailure { attempts: usize },

    #[error("weight is not square: <alpha, dim V> = {pairing}")]
    NonSquareWeight { pairing: i64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("generic decomposition failed validation on all {attempts} attempts")]
    DecompositionUnstable { attempts: usize },

    #[error("zero vector not allowed here")]
    ZeroVector,

    #[error("quiver is not Dynkin")]
    NotDynkin,

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("vertex set {0:?} is not a simplex of the complex")]
    NotASimplex(Vec<usize>),

    #[error("coefficient for vertex {0} is negative")]
    NegativeCoefficient(usize),

    #[error("all coefficients are zero")]
    ZeroCoefficients,

    #[error("ridge {0:?} received no wall label")]
    EmptyLabel(Vec<usize>),

    #[error("export needs n = 2 or n = 3 (got n = {0})")]
    UnsupportedDimension(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
