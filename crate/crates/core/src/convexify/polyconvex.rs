//! Polyconvex lower bound: the convex hull of the lifted point set
//! `{(M(F_i), W(F_i))}` in minors coordinates, evaluated by linear
//! programming at query points.
//!
//! For a query matrix `F` the bound is
//! `min Σ λᵢ W(Fᵢ)  s.t.  Σ λᵢ M(Fᵢ) = M(F), Σ λᵢ = 1, λ ≥ 0`,
//! i.e. the cheapest minors-consistent mixture of sample points. Because
//! the determinant is affine along rank-one segments and multilinear
//! interpolation reproduces minors exactly, this value never exceeds the
//! lamination upper bound computed from the same nodes.

use rayon::prelude::*;

use crate::energy::MechanicalDensity;
use crate::tensor::{minors, Director, Mat};

use super::grid::MatrixGrid;

/// Options for the lower-bound solve.
#[derive(Debug, Clone, Copy)]
pub struct LowerBoundParams {
    /// Also constrain/generate at cell centers (tightens the bound between
    /// nodes at the cost of doubling the generator count).
    pub include_cell_centers: bool,
    /// Simplex pivot cap per query.
    pub max_pivots: usize,
}

impl Default for LowerBoundParams {
    fn default() -> Self {
        LowerBoundParams {
            include_cell_centers: true,
            max_pivots: 400,
        }
    }
}

/// Per-node outcome of the lower-bound solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerStatus {
    Computed,
    /// The query's minors vector is not a mixture of the finite generators;
    /// the grid envelope is unbounded below there in the dual sense and the
    /// node is reported rather than assigned a fake value.
    Infeasible,
    /// Node masked or of infinite density.
    Masked,
}

/// Result of [`polyconvexify_lower`]: one value and status per grid node.
#[derive(Debug, Clone)]
pub struct PolyconvexLower {
    pub values: Vec<f64>,
    pub status: Vec<LowerStatus>,
}

struct GeneratorSet {
    /// Column-major: for each generator, its 5 minors and unit row.
    columns: Vec<[f64; 6]>,
    costs: Vec<f64>,
}

fn build_generators(
    density: &(dyn Fn(&Mat) -> f64 + Sync),
    grid: &MatrixGrid,
    params: &LowerBoundParams,
) -> GeneratorSet {
    let n = grid.node_count();
    let mut mats: Vec<Mat> = Vec::with_capacity(n);
    for idx in 0..n {
        if !grid.masked(idx) {
            mats.push(grid.matrix_at(idx));
        }
    }
    if params.include_cell_centers {
        let counts = [
            grid.axes[0].count - 1,
            grid.axes[1].count - 1,
            grid.axes[2].count - 1,
            grid.axes[3].count - 1,
        ];
        for c0 in 0..counts[0] {
            for c1 in 0..counts[1] {
                for c2 in 0..counts[2] {
                    for c3 in 0..counts[3] {
                        let m = Mat::D2([
                            [
                                grid.axes[0].node(c0) + 0.5 * grid.axes[0].step,
                                grid.axes[1].node(c1) + 0.5 * grid.axes[1].step,
                            ],
                            [
                                grid.axes[2].node(c2) + 0.5 * grid.axes[2].step,
                                grid.axes[3].node(c3) + 0.5 * grid.axes[3].step,
                            ],
                        ]);
                        if !grid.det_mask || m.det() > 0.0 {
                            mats.push(m);
                        }
                    }
                }
            }
        }
    }

    let evals: Vec<(Mat, f64)> = mats
        .into_par_iter()
        .map(|m| {
            let w = density(&m);
            (m, w)
        })
        .collect();

    let mut columns = Vec::new();
    let mut costs = Vec::new();
    for (m, w) in evals {
        if !w.is_finite() {
            continue;
        }
        let mv = minors(&m);
        let v = mv.values();
        columns.push([v[0], v[1], v[2], v[3], v[4], 1.0]);
        costs.push(w);
    }
    GeneratorSet { columns, costs }
}

/// Lower-bound node values for a mechanical density at director `m` over
/// the grid. Masked nodes are reported as such; infeasible queries are
/// marked rather than bounded.
pub fn polyconvexify_lower(
    w: &dyn MechanicalDensity,
    m: &Director,
    grid: &MatrixGrid,
    params: &LowerBoundParams,
) -> PolyconvexLower {
    let density = move |f: &Mat| w.eval(f, m).to_f64();
    polyconvexify_lower_impl(&density, grid, params)
}

pub(crate) fn polyconvexify_lower_impl(
    density: &(dyn Fn(&Mat) -> f64 + Sync),
    grid: &MatrixGrid,
    params: &LowerBoundParams,
) -> PolyconvexLower {
    let gens = build_generators(density, grid, params);
    let n = grid.node_count();
    let out: Vec<(f64, LowerStatus)> = (0..n)
        .into_par_iter()
        .map(|idx| {
            if grid.masked(idx) || !density(&grid.matrix_at(idx)).is_finite() {
                return (f64::INFINITY, LowerStatus::Masked);
            }
            solve_query(&gens, &grid.matrix_at(idx), params.max_pivots)
        })
        .collect();
    PolyconvexLower {
        values: out.iter().map(|(v, _)| *v).collect(),
        status: out.iter().map(|(_, s)| *s).collect(),
    }
}

/// Lower bound at a single (possibly off-node) matrix, using the grid as
/// generator set.
pub fn polyconvex_lower_at(
    w: &dyn MechanicalDensity,
    m: &Director,
    grid: &MatrixGrid,
    queries: &[Mat],
    params: &LowerBoundParams,
) -> Vec<(f64, LowerStatus)> {
    let density = move |f: &Mat| w.eval(f, m).to_f64();
    let gens = build_generators(&density, grid, params);
    queries
        .par_iter()
        .map(|f| solve_query(&gens, f, params.max_pivots))
        .collect()
}

fn solve_query(gens: &GeneratorSet, f: &Mat, max_pivots: usize) -> (f64, LowerStatus) {
    let mv = minors(f);
    let v = mv.values();
    let rhs = [v[0], v[1], v[2], v[3], v[4], 1.0];
    match simplex_min(&gens.columns, &gens.costs, rhs, max_pivots) {
        Some(value) => (value, LowerStatus::Computed),
        None => (f64::INFINITY, LowerStatus::Infeasible),
    }
}

const ROWS: usize = 6;

/// Two-phase revised simplex for `min c·λ  s.t.  A λ = b, λ ≥ 0` with six
/// rows. Returns `None` on infeasibility. Columns are the generator minors.
fn simplex_min(
    columns: &[[f64; ROWS]],
    costs: &[f64],
    b: [f64; ROWS],
    max_pivots: usize,
) -> Option<f64> {
    let n = columns.len();
    if n == 0 {
        return None;
    }

    // Row scaling for conditioning.
    let mut row_scale = [1.0f64; ROWS];
    for r in 0..ROWS {
        let mut m = b[r].abs();
        for col in columns {
            m = m.max(col[r].abs());
        }
        if m > 0.0 {
            row_scale[r] = 1.0 / m;
        }
    }
    let scaled_b: Vec<f64> = (0..ROWS).map(|r| b[r] * row_scale[r]).collect();
    let col = |j: usize, r: usize| -> f64 {
        if j < n {
            columns[j][r] * row_scale[r]
        } else {
            // artificial variable j - n
            if j - n == r {
                1.0
            } else {
                0.0
            }
        }
    };

    // Phase-1 start: artificial basis, flipping signs so b >= 0 is not
    // needed because artificials take the sign of b via the basis inverse.
    let mut basis: Vec<usize> = (n..n + ROWS).collect();
    // basis inverse, dense 6x6, row-major
    let mut binv = [[0.0f64; ROWS]; ROWS];
    for (r, row) in binv.iter_mut().enumerate() {
        row[r] = 1.0;
    }
    // Make artificial solution feasible: x_B = B^-1 b = b; flip artificial
    // signs where b < 0 by negating the corresponding inverse row.
    let mut art_sign = [1.0f64; ROWS];
    for r in 0..ROWS {
        if scaled_b[r] < 0.0 {
            art_sign[r] = -1.0;
            binv[r][r] = -1.0;
        }
    }
    let art_col = |j: usize, r: usize, art_sign: &[f64; ROWS]| -> f64 {
        if j < n {
            col(j, r)
        } else {
            if j - n == r {
                art_sign[r]
            } else {
                0.0
            }
        }
    };

    let xb = |binv: &[[f64; ROWS]; ROWS]| -> [f64; ROWS] {
        let mut x = [0.0; ROWS];
        for r in 0..ROWS {
            for k in 0..ROWS {
                x[r] += binv[r][k] * scaled_b[k];
            }
        }
        x
    };

    let eps = 1e-11;

    for phase in 0..2 {
        let cost = |j: usize| -> f64 {
            if phase == 0 {
                if j >= n {
                    1.0
                } else {
                    0.0
                }
            } else {
                costs[j]
            }
        };

        let mut pivots = 0;
        loop {
            pivots += 1;
            if pivots > max_pivots {
                // stalled; treat as numerical failure -> infeasible report
                return None;
            }
            // dual vector y = c_B B^-1
            let mut y = [0.0f64; ROWS];
            for r in 0..ROWS {
                let cb = cost(basis[r]);
                if cb != 0.0 {
                    for k in 0..ROWS {
                        y[k] += cb * binv[r][k];
                    }
                }
            }
            // entering column: most negative reduced cost (Dantzig), with a
            // Bland fallback kick after many pivots to break cycles
            let bland = pivots > max_pivots / 2;
            let mut enter: Option<usize> = None;
            let mut best_rc = -eps;
            let jmax = if phase == 0 { n + ROWS } else { n };
            for j in 0..jmax {
                if phase == 1 && j >= n {
                    break;
                }
                let mut rc = cost(j);
                for r in 0..ROWS {
                    rc -= y[r] * art_col(j, r, &art_sign);
                }
                if rc < best_rc {
                    best_rc = rc;
                    enter = Some(j);
                    if bland {
                        break;
                    }
                }
            }
            let enter = match enter {
                Some(j) => j,
                None => break, // optimal for this phase
            };

            // direction d = B^-1 A_enter
            let mut d = [0.0f64; ROWS];
            for r in 0..ROWS {
                for k in 0..ROWS {
                    d[r] += binv[r][k] * art_col(enter, k, &art_sign);
                }
            }
            let x = xb(&binv);
            let mut leave: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for r in 0..ROWS {
                if d[r] > eps {
                    let ratio = x[r] / d[r];
                    if ratio < best_ratio - 1e-15 {
                        best_ratio = ratio;
                        leave = Some(r);
                    }
                }
            }
            let leave = match leave {
                Some(r) => r,
                None => {
                    // unbounded: cannot happen with the simplex constraint
                    // sum(lambda) = 1 unless numerics degraded
                    return None;
                }
            };

            // pivot: update basis inverse with an eta transformation
            basis[leave] = enter;
            let pivot = d[leave];
            for k in 0..ROWS {
                binv[leave][k] /= pivot;
            }
            for r in 0..ROWS {
                if r != leave && d[r].abs() > 0.0 {
                    let factor = d[r];
                    for k in 0..ROWS {
                        binv[r][k] -= factor * binv[leave][k];
                    }
                }
            }
        }

        if phase == 0 {
            // feasibility check: artificial content of the solution
            let x = xb(&binv);
            let mut art_residual = 0.0;
            for r in 0..ROWS {
                if basis[r] >= n {
                    art_residual += x[r].abs();
                }
            }
            if art_residual > 1e-7 {
                return None;
            }
        }
    }

    let x = xb(&binv);
    let mut value = 0.0;
    for r in 0..ROWS {
        if basis[r] < n {
            value += costs[basis[r]] * x[r];
        }
    }
    Some(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexify::rank_one::{rank_one_iterate, LaminationParams};
    use crate::energy::{make_double_well, Theta};
    use crate::tensor::Director;
    use approx::assert_abs_diff_eq;

    fn lp_params() -> LowerBoundParams {
        LowerBoundParams {
            include_cell_centers: false,
            max_pivots: 400,
        }
    }

    #[test]
    fn affine_in_det_is_exact() {
        // W(F) = det F is polyaffine: the lower bound reproduces it exactly
        let grid = MatrixGrid::symmetric(1.0, 5, false).unwrap();
        let density = |f: &Mat| f.det();
        let lower = polyconvexify_lower_impl(&density, &grid, &lp_params());
        for idx in 0..grid.node_count() {
            assert_eq!(lower.status[idx], LowerStatus::Computed);
            assert_abs_diff_eq!(lower.values[idx], grid.matrix_at(idx).det(), epsilon = 1e-8);
        }
    }

    #[test]
    fn convex_in_minors_is_reproduced() {
        // W(F) = |F|^2 + (det F)^2 is convex in (F, det F)
        let grid = MatrixGrid::symmetric(1.0, 4, false).unwrap();
        let density = |f: &Mat| f.dot(f) + f.det() * f.det();
        let lower = polyconvexify_lower_impl(&density, &grid, &lp_params());
        for idx in 0..grid.node_count() {
            let want = density(&grid.matrix_at(idx));
            assert!(
                (lower.values[idx] - want).abs() < 1e-7,
                "node {idx}: lower {} vs W {want}",
                lower.values[idx]
            );
        }
    }

    #[test]
    fn double_well_lower_below_lamination_upper() {
        let a = Mat::diag(&[0.7, 1.0]);
        let b = Mat::diag(&[1.3, 1.0]);
        let n0 = Director::axis(2, 0);
        let w = make_double_well(a, b, 0.0, n0, Theta::with_weight(2.0, 2.0, 0.1), 0.0).unwrap();
        let grid = MatrixGrid::covering(&[a, b], 0.8, 7, true).unwrap();

        let density = |f: &Mat| w.eval(f, &n0).to_f64();
        let params = LaminationParams {
            dirs_per_vector: 8,
            segment_steps: 3,
            lambda_grid: 9,
            golden_iters: 6,
            max_iters: 20,
            tol: 1e-9,
        };
        let (_, upper, _, _) = rank_one_iterate(&density, &grid, &params);
        let lower = polyconvexify_lower_impl(&density, &grid, &lp_params());

        for idx in 0..grid.node_count() {
            if grid.masked(idx) {
                continue;
            }
            if lower.status[idx] == LowerStatus::Computed && upper[idx].is_finite() {
                assert!(
                    lower.values[idx] <= upper[idx] + 1e-9,
                    "ordering violated at node {idx}: lower {} > upper {}",
                    lower.values[idx],
                    upper[idx]
                );
            }
        }
    }
}
