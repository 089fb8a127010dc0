//! Hierarchical rank-one splittings realizing a lamination value.
//!
//! A [`LaminateTree`] records the microstructure behind an envelope value:
//! each split writes `F = λF⁺ + (1−λ)F⁻` with `F⁺ − F⁻` rank one, down to
//! leaves evaluated by the density itself. The tree is what the recovery
//! construction turns into an oscillating test map.

use crate::energy::MechanicalDensity;
use crate::tensor::{Director, Mat};

use super::rank_one::{best_split, direction_set, LaminationParams};
use super::EnvelopeApprox;

#[derive(Debug, Clone)]
pub enum LaminateNode {
    Leaf {
        value: f64,
    },
    Split {
        lambda: f64,
        /// Rank-one direction of the split (unit Frobenius norm).
        direction: Mat,
        plus: Box<LaminateTree>,
        minus: Box<LaminateTree>,
    },
}

#[derive(Debug, Clone)]
pub struct LaminateTree {
    pub matrix: Mat,
    pub node: LaminateNode,
    /// Set when the depth cap was exhausted before leaves converged.
    pub flagged: bool,
}

impl LaminateTree {
    pub fn leaf(matrix: Mat, value: f64) -> LaminateTree {
        LaminateTree {
            matrix,
            node: LaminateNode::Leaf { value },
            flagged: false,
        }
    }

    /// Recursive convex-combination value of the tree.
    pub fn value(&self) -> f64 {
        match &self.node {
            LaminateNode::Leaf { value } => *value,
            LaminateNode::Split {
                lambda,
                plus,
                minus,
                ..
            } => lambda * minus.value() + (1.0 - lambda) * plus.value(),
        }
    }

    pub fn depth(&self) -> usize {
        match &self.node {
            LaminateNode::Leaf { .. } => 0,
            LaminateNode::Split { plus, minus, .. } => 1 + plus.depth().max(minus.depth()),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.node, LaminateNode::Leaf { .. })
    }

    /// Largest residual of the convex-combination identity
    /// `F = λF⁻ + (1−λ)F⁺` over all splits.
    pub fn combination_residual(&self) -> f64 {
        match &self.node {
            LaminateNode::Leaf { .. } => 0.0,
            LaminateNode::Split {
                lambda,
                plus,
                minus,
                ..
            } => {
                let recomposed = minus
                    .matrix
                    .scale(*lambda)
                    .add(&plus.matrix.scale(1.0 - *lambda));
                let own = self.matrix.sub(&recomposed).norm();
                own.max(plus.combination_residual())
                    .max(minus.combination_residual())
            }
        }
    }

    /// Whether any node carries the depth-exhaustion flag.
    pub fn any_flagged(&self) -> bool {
        if self.flagged {
            return true;
        }
        match &self.node {
            LaminateNode::Leaf { .. } => false,
            LaminateNode::Split { plus, minus, .. } => plus.any_flagged() || minus.any_flagged(),
        }
    }
}

/// Greedily re-solve the split minimization at `f` against the envelope's
/// upper table, recursing until leaves are within `tol` of the density (or
/// the depth cap binds, which flags the returned tree).
pub fn extract_laminate(
    w: &dyn MechanicalDensity,
    m: &Director,
    f: &Mat,
    envelope: &EnvelopeApprox,
    params: &LaminationParams,
    max_depth: usize,
    tol: f64,
) -> LaminateTree {
    let dirs = direction_set(params.dirs_per_vector);
    build(w, m, f, envelope, &dirs, params, max_depth, tol)
}

#[allow(clippy::too_many_arguments)]
fn build(
    w: &dyn MechanicalDensity,
    m: &Director,
    f: &Mat,
    envelope: &EnvelopeApprox,
    dirs: &[Mat],
    params: &LaminationParams,
    depth_left: usize,
    tol: f64,
) -> LaminateTree {
    let direct = w.eval(f, m).to_f64();
    let split = best_split(&envelope.grid, &envelope.upper, dirs, f, direct, params);
    match split {
        Some(s) if s.value < direct - tol => {
            if depth_left == 0 {
                let mut leaf = LaminateTree::leaf(*f, direct);
                leaf.flagged = true;
                log::warn!(
                    "laminate extraction hit the depth cap at |F| = {:.3} with residual gain {:.3e}",
                    f.norm(),
                    direct - s.value
                );
                return leaf;
            }
            let (f_minus, f_plus) = s.endpoints(f);
            let minus = build(w, m, &f_minus, envelope, dirs, params, depth_left - 1, tol);
            let plus = build(w, m, &f_plus, envelope, dirs, params, depth_left - 1, tol);
            LaminateTree {
                matrix: *f,
                node: LaminateNode::Split {
                    lambda: s.lambda(),
                    direction: s.direction,
                    plus: Box::new(plus),
                    minus: Box::new(minus),
                },
                flagged: false,
            }
        }
        _ => LaminateTree::leaf(*f, direct),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexify::grid::MatrixGrid;
    use crate::convexify::rank_one::rank_one_convexify;
    use crate::energy::{make_double_well, make_w0_compressible, Theta};
    use crate::tensor::Director;

    fn params() -> LaminationParams {
        LaminationParams {
            dirs_per_vector: 8,
            segment_steps: 4,
            lambda_grid: 17,
            golden_iters: 8,
            max_iters: 25,
            tol: 1e-9,
        }
    }

    #[test]
    fn convex_density_gives_leaf() {
        let w = make_w0_compressible(2, 2.0, 2.0, 2.0).unwrap();
        let m = Director::axis(2, 0);
        let grid = MatrixGrid::covering(&[Mat::identity(2)], 1.0, 7, true).unwrap();
        let env = rank_one_convexify(&w, &m, &grid, &params());
        let tree = extract_laminate(&w, &m, &Mat::identity(2), &env, &params(), 3, 1e-6);
        assert!(tree.is_leaf());
        assert_eq!(tree.depth(), 0);
    }

    #[test]
    fn symmetric_double_well_splits_at_half() {
        let a = Mat::diag(&[0.7, 1.0]);
        let b = Mat::diag(&[1.3, 1.0]);
        let n0 = Director::axis(2, 0);
        let w = make_double_well(a, b, 0.0, n0, Theta::with_weight(2.0, 2.0, 0.05), 0.0).unwrap();
        let grid = MatrixGrid::covering(&[a, b], 1.0, 13, true).unwrap();
        let env = rank_one_convexify(&w, &n0, &grid, &params());

        let mid = a.add(&b).scale(0.5);
        let tree = extract_laminate(&w, &n0, &mid, &env, &params(), 4, 1e-6);
        assert!(!tree.is_leaf(), "midpoint must split");
        if let LaminateNode::Split { lambda, .. } = &tree.node {
            assert!((lambda - 0.5).abs() < 0.06, "lambda = {lambda}");
        }
        // construction invariant
        assert!(tree.combination_residual() < 1e-10);
        // the tree realizes the envelope value within tolerance
        let upper = env.eval_upper(&mid).unwrap();
        assert!(
            (tree.value() - upper).abs() < 5e-2 * (1.0 + upper.abs()),
            "tree value {} vs envelope {upper}",
            tree.value()
        );
    }
}
