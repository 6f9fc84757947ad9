use thiserror::Error;

/// Errors shared across the algebra, calculus, and transform layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u8, u8),
    #[error("ambient dimension {0} out of range (3..=16 supported, {1} required here)")]
    DimensionOutOfRange(u8, u8),
    #[error("grade {grade} out of range for dimension {r}")]
    GradeOutOfRange { grade: u32, r: u8 },
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("metric degenerate (W <= tol) at {count} of {total} nodes")]
    DegenerateMetric { count: usize, total: usize },
    #[error("grid too small: axis needs at least {needed} nodes, got {got}")]
    GridTooSmall { needed: usize, got: usize },
    #[error("one-form is not closed: residual {residual:.3e} exceeds threshold {threshold:.3e}")]
    NotClosed { residual: f64, threshold: f64 },
    #[error("map is not sphere-valued within tolerance: worst deviation {0:.3e}")]
    NotSphereValued(f64),
    #[error("surface is not minimal: {0}")]
    NotMinimal(String),
    #[error("section is not holomorphic: residual {residual:.3e} exceeds threshold {threshold:.3e}")]
    NotHolomorphic { residual: f64, threshold: f64 },
    #[error("wedge condition violated: residual {residual:.3e} exceeds threshold {threshold:.3e}")]
    WedgeNotZero { residual: f64, threshold: f64 },
    #[error("nodewise solve for chi is ill-conditioned: {0}")]
    IllConditionedChi(String),
    #[error("sigma parameter must be nonzero")]
    SigmaZero,
    #[error("input is not pure grade 2: worst off-grade mass {0:.3e}")]
    NotGrade2(f64),
    #[error("sequence step would need ambient dimension {0}, above the cap of 16")]
    RCapExceeded(u64),
    #[error("sequence step degenerate: {0}")]
    DegenerateStep(String),
    #[error("commutator nonzero: |fN - Nf| = {0:.3e} exceeds tolerance")]
    CommutatorNonzero(f64),
    #[error("invalid surface specification: {0}")]
    InvalidSurfaceSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
