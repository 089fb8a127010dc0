//! Lamination (rank-one convexification) upper envelope.
//!
//! Iterates
//! `W_{k+1}(F) = min over rank-one segments through F of λ W_k(F₁) + (1−λ) W_k(F₂)`
//! on a matrix grid, with segment endpoints evaluated by multilinear
//! interpolation. The iteration is monotone nonincreasing; infinite nodes
//! saturate and never win a minimum. Since quasiconvex functions are
//! rank-one convex, the fixed point upper-bounds the quasiconvexification.

use rayon::prelude::*;

use crate::energy::MechanicalDensity;
use crate::tensor::{Director, Mat, Vector};

use super::grid::MatrixGrid;
use super::EnvelopeApprox;

/// Discretization knobs for the lamination search.
#[derive(Debug, Clone, Copy)]
pub struct LaminationParams {
    /// Angular resolution: directions per vector on the half-circle.
    pub dirs_per_vector: usize,
    /// Maximum integer steps (in units of the smallest axis step) along
    /// each side of a segment.
    pub segment_steps: usize,
    /// Size of the λ scan applied to the best direction of each node.
    pub lambda_grid: usize,
    /// Golden-section iterations refining the best λ cell.
    pub golden_iters: usize,
    pub max_iters: usize,
    /// Stop when the largest nodal decrease of a sweep falls below this.
    pub tol: f64,
}

impl Default for LaminationParams {
    fn default() -> Self {
        LaminationParams {
            dirs_per_vector: 32,
            segment_steps: 6,
            lambda_grid: 33,
            golden_iters: 10,
            max_iters: 40,
            tol: 1e-8,
        }
    }
}

/// Rank-one direction set `a ⊗ b` with `a`, `b` on angular half-circle
/// grids; all directions have unit Frobenius norm.
pub(crate) fn direction_set(dirs_per_vector: usize) -> Vec<Mat> {
    let mut dirs = Vec::with_capacity(dirs_per_vector * dirs_per_vector);
    for i in 0..dirs_per_vector {
        let ta = std::f64::consts::PI * i as f64 / dirs_per_vector as f64;
        let a = Vector::D2([ta.cos(), ta.sin()]);
        for j in 0..dirs_per_vector {
            let tb = std::f64::consts::PI * j as f64 / dirs_per_vector as f64;
            let b = Vector::D2([tb.cos(), tb.sin()]);
            dirs.push(Mat::outer(&a, &b));
        }
    }
    dirs
}

/// One candidate split through a matrix: `F₁ = F − t₋·R`, `F₂ = F + t₊·R`,
/// `F = λF₁ + (1−λ)F₂` with `λ = t₊/(t₋+t₊)`.
#[derive(Debug, Clone, Copy)]
pub struct SplitCandidate {
    pub direction: Mat,
    pub t_minus: f64,
    pub t_plus: f64,
    pub value: f64,
}

impl SplitCandidate {
    pub fn lambda(&self) -> f64 {
        self.t_plus / (self.t_minus + self.t_plus)
    }

    pub fn endpoints(&self, f: &Mat) -> (Mat, Mat) {
        (
            f.sub(&self.direction.scale(self.t_minus)),
            f.add(&self.direction.scale(self.t_plus)),
        )
    }
}

/// Search the best rank-one split of `f` against interpolated nodal values.
///
/// Returns `None` when no admissible segment beats `current` (within the
/// tolerance). Used both by the grid sweep and by laminate extraction.
pub(crate) fn best_split(
    grid: &MatrixGrid,
    values: &[f64],
    dirs: &[Mat],
    f: &Mat,
    current: f64,
    params: &LaminationParams,
) -> Option<SplitCandidate> {
    let h = grid.min_step();
    let kmax = params.segment_steps;
    let mut best_val = current;
    let mut best: Option<(usize, usize, usize)> = None; // (dir, i, j)

    let mut minus = vec![f64::INFINITY; kmax + 1];
    let mut plus = vec![f64::INFINITY; kmax + 1];

    for (d, r) in dirs.iter().enumerate() {
        let mut any = false;
        for k in 1..=kmax {
            let t = k as f64 * h;
            minus[k] = grid
                .interpolate_opt(values, &f.sub(&r.scale(t)))
                .unwrap_or(f64::INFINITY);
            plus[k] = grid
                .interpolate_opt(values, &f.add(&r.scale(t)))
                .unwrap_or(f64::INFINITY);
            any = any || minus[k].is_finite() || plus[k].is_finite();
        }
        if !any {
            continue;
        }
        for i in 1..=kmax {
            if minus[i] == f64::INFINITY {
                continue;
            }
            for j in 1..=kmax {
                if plus[j] == f64::INFINITY {
                    continue;
                }
                let val = (j as f64 * minus[i] + i as f64 * plus[j]) / (i + j) as f64;
                if val < best_val {
                    best_val = val;
                    best = Some((d, i, j));
                }
            }
        }
    }

    let (d, i, j) = best?;
    let r = &dirs[d];
    let total = (i + j) as f64 * h;

    // λ scan at fixed segment length, then golden-section refinement of the
    // best cell
    let eval_lambda = |lambda: f64| -> f64 {
        if lambda <= 0.0 || lambda >= 1.0 {
            return f64::INFINITY;
        }
        let f1 = f.sub(&r.scale((1.0 - lambda) * total));
        let f2 = f.add(&r.scale(lambda * total));
        let w1 = grid.interpolate_opt(values, &f1).unwrap_or(f64::INFINITY);
        let w2 = grid.interpolate_opt(values, &f2).unwrap_or(f64::INFINITY);
        if w1 == f64::INFINITY || w2 == f64::INFINITY {
            f64::INFINITY
        } else {
            lambda * w1 + (1.0 - lambda) * w2
        }
    };

    let mut best_lambda = j as f64 / (i + j) as f64;
    let g = params.lambda_grid;
    for step in 1..g {
        let lambda = step as f64 / g as f64;
        let v = eval_lambda(lambda);
        if v < best_val {
            best_val = v;
            best_lambda = lambda;
        }
    }

    let (mut lo, mut hi) = (
        (best_lambda - 1.0 / g as f64).max(1e-6),
        (best_lambda + 1.0 / g as f64).min(1.0 - 1e-6),
    );
    let phi = 0.618_033_988_749_894_9;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut v1, mut v2) = (eval_lambda(x1), eval_lambda(x2));
    for _ in 0..params.golden_iters {
        if v1 <= v2 {
            hi = x2;
            x2 = x1;
            v2 = v1;
            x1 = hi - phi * (hi - lo);
            v1 = eval_lambda(x1);
        } else {
            lo = x1;
            x1 = x2;
            v1 = v2;
            x2 = lo + phi * (hi - lo);
            v2 = eval_lambda(x2);
        }
    }
    for (x, v) in [(x1, v1), (x2, v2)] {
        if v < best_val {
            best_val = v;
            best_lambda = x;
        }
    }

    Some(SplitCandidate {
        direction: *r,
        t_minus: (1.0 - best_lambda) * total,
        t_plus: best_lambda * total,
        value: best_val,
    })
}

/// Run the lamination sweep for an arbitrary nodal density (saturating
/// `f64` representation). Returns the converged values, the sweep count and
/// the convergence flag.
pub(crate) fn rank_one_iterate(
    density: &(dyn Fn(&Mat) -> f64 + Sync),
    grid: &MatrixGrid,
    params: &LaminationParams,
) -> (Vec<f64>, Vec<f64>, usize, bool) {
    let n = grid.node_count();
    let initial: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|idx| {
            if grid.masked(idx) {
                f64::INFINITY
            } else {
                density(&grid.matrix_at(idx))
            }
        })
        .collect();

    let dirs = direction_set(params.dirs_per_vector);
    let mut values = initial.clone();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < params.max_iters {
        iterations += 1;
        let prev = &values;
        let next: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|idx| {
                let cur = prev[idx];
                if grid.masked(idx) {
                    return cur;
                }
                let f = grid.matrix_at(idx);
                match best_split(grid, prev, &dirs, &f, cur, params) {
                    Some(split) if split.value < cur => split.value,
                    _ => cur,
                }
            })
            .collect();

        let max_decrease = prev
            .iter()
            .zip(next.iter())
            .map(|(&p, &q)| if p.is_finite() { p - q } else { 0.0 })
            .fold(0.0f64, f64::max);
        values = next;
        if max_decrease < params.tol {
            converged = true;
            break;
        }
    }

    (initial, values, iterations, converged)
}

/// Lamination upper approximation of the quasiconvex envelope of a
/// mechanical density at the fixed director `m`.
///
/// Monotone nonincreasing in the sweep index and never below the polyconvex
/// lower bound computed from the same nodal data. Non-convergence within
/// `max_iters` is flagged on the returned table, which remains a valid
/// upper bound.
pub fn rank_one_convexify(
    w: &dyn MechanicalDensity,
    m: &Director,
    grid: &MatrixGrid,
    params: &LaminationParams,
) -> EnvelopeApprox {
    let f = |mat: &Mat| w.eval(mat, m).to_f64();
    let (density, upper, iterations, converged) = rank_one_iterate(&f, grid, params);
    if !converged {
        log::warn!("lamination sweep did not converge after {iterations} iterations; returning the partial (still valid) upper bound");
    }
    EnvelopeApprox {
        grid: grid.clone(),
        density,
        upper,
        lower: Vec::new(),
        director: Some(*m),
        tangential_at: None,
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexify::grid::MatrixGrid;
    use crate::energy::{make_double_well, make_kohn_strang, Theta};
    use crate::tensor::Director;

    fn small_params() -> LaminationParams {
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
    fn convex_density_is_fixed_point() {
        // |F|^2 alone on a det-masked grid: convex, hence its own envelope
        let grid = MatrixGrid::symmetric(1.5, 5, true).unwrap();
        let f = |m: &Mat| m.dot(m);
        let (initial, upper, _, converged) = rank_one_iterate(&f, &grid, &small_params());
        assert!(converged);
        for (a, b) in initial.iter().zip(upper.iter()) {
            if a.is_finite() {
                assert!((a - b).abs() < 1e-9, "convex density moved: {a} -> {b}");
            }
        }
    }

    #[test]
    fn double_well_midpoint_drops_to_split_oracle() {
        let a = Mat::diag(&[0.7, 1.0]);
        let b = Mat::diag(&[1.3, 1.0]);
        let n0 = Director::axis(2, 0);
        let theta = Theta::with_weight(2.0, 2.0, 0.1);
        let w = make_double_well(a, b, 0.0, n0, theta, 0.0).unwrap();

        let grid = MatrixGrid::covering(&[a, b], 1.0, 13, true).unwrap();
        let params = small_params();
        let env = rank_one_convexify(&w, &n0, &grid, &params);
        assert!(env.converged);

        let mid = a.add(&b).scale(0.5);
        let upper_mid = env.eval_upper(&mid).unwrap();
        let w_mid = w.eval(&mid, &n0).to_f64();

        // one-level split oracle: exact evaluation at the wells
        let oracle = 0.5 * w.eval(&a, &n0).to_f64() + 0.5 * w.eval(&b, &n0).to_f64();
        assert!(upper_mid < w_mid - 1e-3, "no drop at the midpoint");
        assert!(
            upper_mid <= oracle + 1e-9,
            "upper {upper_mid} above the one-level oracle {oracle}"
        );

        // monotone and never above the density
        for idx in 0..grid.node_count() {
            assert!(env.upper[idx] <= env.density[idx] + 1e-12);
        }
    }

    #[test]
    fn kohn_strang_drop_region_roughly_matches_closed_form() {
        // coarse sanity check; the acceptance suite validates at 2%
        let w = make_kohn_strang();
        let m = Director::axis(2, 0);
        let grid = MatrixGrid::symmetric(1.2, 9, false).unwrap();
        let env = rank_one_convexify(&w, &m, &grid, &small_params());

        let closed_form = |f: &Mat| -> f64 {
            let rho2 = f.dot(f) + 2.0 * f.det().abs();
            if rho2 >= 1.0 {
                1.0 + f.dot(f)
            } else {
                2.0 * rho2.sqrt() - 2.0 * f.det().abs()
            }
        };

        let f = Mat::D2([[0.3, 0.0], [0.0, 0.3]]);
        let got = env.eval_upper(&f).unwrap();
        let want = closed_form(&f);
        assert!(
            (got - want).abs() / want < 0.10,
            "envelope {got} vs closed form {want}"
        );
    }
}
