//! Tangential quasiconvexification through the projection lift.
//!
//! For a nematic density `V` on tangent matrices at `z`, the lift
//! `V̄(z, ζ) = V(z, P_z ζ)` is defined on all matrices; its rank-one
//! envelope, restricted back to tangential arguments, upper-bounds the
//! tangential quasiconvexification. Evaluation projects queries with `P_z`
//! first, so the envelope is `P_z`-invariant by construction.

use crate::energy::NematicDensity;
use crate::tensor::{projection, Director, Mat};

use super::grid::MatrixGrid;
use super::polyconvex::{polyconvexify_lower_impl, LowerBoundParams};
use super::rank_one::{rank_one_iterate, LaminationParams};
use super::EnvelopeApprox;

/// Alias clarifying that the table lives on the tangent-space lift.
pub type TangentialEnvelope = EnvelopeApprox;

/// Rank-one envelope of the projection lift of `V` at the sphere point `z`.
///
/// The grid discretizes full 2×2 matrices `ζ` (no determinant mask: nematic
/// densities are finite everywhere). When `with_lower` is set the
/// polyconvex lower bound of the lift is attached as well.
pub fn tangential_quasiconvexify(
    v: &dyn NematicDensity,
    z: &Director,
    grid: &MatrixGrid,
    params: &LaminationParams,
    lower: Option<&LowerBoundParams>,
) -> TangentialEnvelope {
    let p = projection(z);
    let lifted = move |zeta: &Mat| v.eval(z, &p.mul(zeta));
    let (density, upper, iterations, converged) = rank_one_iterate(&lifted, grid, params);
    let mut env = EnvelopeApprox {
        grid: grid.clone(),
        density,
        upper,
        lower: Vec::new(),
        director: Some(*z),
        tangential_at: Some(*z),
        iterations,
        converged,
    };
    if let Some(lp) = lower {
        let bound = polyconvexify_lower_impl(&lifted, grid, lp);
        env.lower = bound.values;
    }
    env
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{make_one_constant, make_tangent_double_well};
    use crate::tensor::Vector;

    fn params() -> LaminationParams {
        LaminationParams {
            dirs_per_vector: 8,
            segment_steps: 4,
            lambda_grid: 17,
            golden_iters: 8,
            max_iters: 25,
            tol: 1e-10,
        }
    }

    #[test]
    fn one_constant_is_its_own_envelope() {
        let v = make_one_constant(2, 1.3).unwrap();
        let z = Director::from_angle(0.4);
        let grid = MatrixGrid::symmetric(1.0, 7, false).unwrap();
        let env = tangential_quasiconvexify(&v, &z, &grid, &params(), None);
        assert!(env.converged);
        for idx in 0..grid.node_count() {
            assert!(
                (env.upper[idx] - env.density[idx]).abs() < 1e-8,
                "convex nematic density moved at node {idx}"
            );
        }
    }

    #[test]
    fn tangent_double_well_drops_at_midpoint() {
        let c = Vector::D2([1.0, 0.0]);
        let v = make_tangent_double_well(c, c.scale(-1.0), 1.0, 1e-4).unwrap();
        let z = Director::from_angle(0.0);
        let grid = MatrixGrid::symmetric(1.5, 13, false).unwrap();
        let env = tangential_quasiconvexify(&v, &z, &grid, &params(), None);

        // midpoint of the wells is zero; the depth-1 split oracle mixes the
        // wells at lambda = 1/2
        let mid = Mat::zero(2);
        let (w1, w2) = v.wells_at(&z);
        let oracle = 0.5 * v.eval(&z, &w1) + 0.5 * v.eval(&z, &w2);
        let got = env.eval_upper(&mid).unwrap();
        let direct = v.eval(&z, &mid);
        assert!(got < direct - 0.5, "no strict drop: {got} vs {direct}");
        assert!((got - oracle).abs() < 1e-6, "{got} vs oracle {oracle}");
    }

    #[test]
    fn envelope_is_projection_invariant() {
        let c = Vector::D2([0.6, -0.2]);
        let v = make_tangent_double_well(c, c.scale(-0.5), 0.8, 1e-3).unwrap();
        let z = Director::from_angle(1.1);
        let grid = MatrixGrid::symmetric(1.2, 9, false).unwrap();
        let env = tangential_quasiconvexify(&v, &z, &grid, &params(), None);

        // evaluating at a non-tangential zeta equals evaluating its
        // projection
        let zeta = Mat::D2([[0.3, 0.5], [-0.1, 0.2]]);
        let projected = projection(&z).mul(&zeta);
        let a = env.eval_upper(&zeta).unwrap();
        let b = env.eval_upper(&projected).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
}
