use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("empty point list")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient dimension must be at least {min}, found {found}")]
    DimensionTooSmall { min: usize, found: usize },
    #[error("halfspace system is unbounded")]
    Unbounded,
    #[error("halfspace system is infeasible")]
    EmptyRegion,
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("vector {0} is not primitive")]
    NotPrimitive(String),
    #[error("scale factor must be nonnegative, got {0}")]
    NegativeScale(String),
    #[error("expected {expected} bodies, found {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("Minkowski sum is not full-dimensional; degenerate along normal {0}")]
    DegenerateMeasure(String),
    #[error("containment violated: {0}")]
    ContainmentViolated(String),
    #[error("index {index} out of range for {len} rays")]
    RayIndexOutOfRange { index: usize, len: usize },
    #[error("invalid toric data: {0}")]
    InvalidToricData(String),
    #[error("Newton polytope is lower-dimensional (intrinsic dimension {0})")]
    LowerDimensional(usize),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("invalid knot data: {0}")]
    InvalidKnots(String),
    #[error("singular linear system")]
    Singular,
    #[error("instance generation failed: {0}")]
    Generation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl GeometryError {
    /// True for errors caused by malformed input rather than infeasible geometry.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            GeometryError::Parse(_)
                | GeometryError::EmptyInput
                | GeometryError::DimensionMismatch { .. }
                | GeometryError::WrongArity { .. }
                | GeometryError::RayIndexOutOfRange { .. }
                | GeometryError::NotPrimitive(_)
                | GeometryError::InvalidToricData(_)
                | GeometryError::InvalidKnots(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, GeometryError>;
