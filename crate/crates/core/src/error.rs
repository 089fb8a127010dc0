use thiserror::Error;

/// Errors reported by the numerical toolkit.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vector too short to normalize (|v| = {norm:.3e} < 1e-8)")]
    DegenerateDirector { norm: f64 },

    #[error("query {point:?} lies outside the grid")]
    OutsideGrid { point: Vec<f64> },

    #[error("point {point:?} lies outside the mesh")]
    OutsideMesh { point: [f64; 2] },

    #[error("director carrier does not cover {count} image point(s); first offender {first:?}")]
    CoverageViolation { count: usize, first: [f64; 2] },

    #[error("deformation is not injective on the requested region: {0}")]
    NonInjective(String),

    #[error("degree query point too close to the image of the boundary (distance {dist:.3e})")]
    DegreeNearBoundary { dist: f64 },

    #[error("degree sum is not close to an integer (residual {residual:.3e})")]
    DegreeResidual { residual: f64 },

    #[error("cell {cell} has non-positive orientation (det = {det:.3e})")]
    NonPositiveDet { cell: usize, det: f64 },

    #[error("nodal values disagree in the transition annulus at node {node} (|Δ| = {diff:.3e})")]
    AnnulusMismatch { node: usize, diff: f64 },

    #[error("boundary condition violated at node {node} (|Δ| = {diff:.3e})")]
    BoundaryMismatch { node: usize, diff: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}
