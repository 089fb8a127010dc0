//! Numerical envelopes bracketing the quasiconvexification.
//!
//! The lamination sweep gives an upper approximation (quasiconvex implies
//! rank-one convex), the convex hull in minors coordinates gives a
//! polyconvex lower bound (polyconvex implies quasiconvex), and a direct
//! cell-problem discretization provides an independent cross-check between
//! the two. The tangential quasiconvexification of a nematic density is
//! computed through the projection lift onto full matrices.

mod cell;
mod grid;
mod laminate;
mod polyconvex;
mod rank_one;
mod tangential;

pub use cell::{cell_problem_qc, CellProblemParams, CellProblemValue};
pub use grid::{GridAxis, MatrixGrid};
pub use laminate::{extract_laminate, LaminateNode, LaminateTree};
pub use polyconvex::{
    polyconvex_lower_at, polyconvexify_lower, LowerBoundParams, LowerStatus, PolyconvexLower,
};
pub use rank_one::{rank_one_convexify, LaminationParams, SplitCandidate};
pub use tangential::{tangential_quasiconvexify, TangentialEnvelope};

use crate::error::CoreError;
use crate::tensor::{Director, Mat};
use crate::Result;

/// Bracketing approximation of a quasiconvex envelope over a matrix grid.
///
/// `upper` holds the lamination values, `lower` the polyconvex hull values
/// (empty until computed). At every node `lower ≤ upper ≤ density` up to
/// roundoff; infinite entries mark masked or inadmissible nodes.
#[derive(Debug, Clone)]
pub struct EnvelopeApprox {
    pub grid: MatrixGrid,
    /// The density sampled at the nodes.
    pub density: Vec<f64>,
    /// Lamination (rank-one) upper bound per node.
    pub upper: Vec<f64>,
    /// Polyconvex lower bound per node; empty when not yet computed.
    pub lower: Vec<f64>,
    /// The fixed director at which the envelope was computed, if any.
    pub director: Option<Director>,
    /// For tangential envelopes: the sphere point whose tangent space was
    /// lifted. Evaluation projects queries onto that tangent space first.
    pub tangential_at: Option<Director>,
    pub iterations: usize,
    pub converged: bool,
}

impl EnvelopeApprox {
    /// Interpolated upper (lamination) value; errors outside the grid.
    pub fn eval_upper(&self, f: &Mat) -> Result<f64> {
        let f = self.project(f);
        self.grid.interpolate(&self.upper, &f)
    }

    /// Interpolated lower (polyconvex) value; errors outside the grid or
    /// when the lower table has not been computed.
    pub fn eval_lower(&self, f: &Mat) -> Result<f64> {
        if self.lower.len() != self.grid.node_count() {
            return Err(CoreError::Numerical(
                "polyconvex lower bound has not been computed for this envelope".into(),
            ));
        }
        let f = self.project(f);
        self.grid.interpolate(&self.lower, &f)
    }

    /// Interpolated density value.
    pub fn eval_density(&self, f: &Mat) -> Result<f64> {
        let f = self.project(f);
        self.grid.interpolate(&self.density, &f)
    }

    fn project(&self, f: &Mat) -> Mat {
        match &self.tangential_at {
            Some(z) => crate::tensor::projection(z).mul(f),
            None => *f,
        }
    }

    /// Largest `upper − lower` over nodes where both are finite. Reported as
    /// the bracketing gap; no claim is made that either bound equals the
    /// true envelope.
    pub fn max_gap(&self) -> Option<f64> {
        if self.lower.len() != self.upper.len() {
            return None;
        }
        let mut gap: Option<f64> = None;
        for (u, l) in self.upper.iter().zip(self.lower.iter()) {
            if u.is_finite() && l.is_finite() {
                let g = u - l;
                gap = Some(gap.map_or(g, |x: f64| x.max(g)));
            }
        }
        gap
    }

    /// Attach a computed lower table.
    pub fn with_lower(mut self, lower: PolyconvexLower) -> EnvelopeApprox {
        self.lower = lower.values;
        self
    }
}
