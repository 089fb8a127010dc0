//! Regular grids over 2×2 matrix space.
//!
//! A [`MatrixGrid`] discretizes the four entries of a 2×2 matrix (row-major
//! axis order F11, F12, F21, F22). Nodes with `det ≤ 0` can be masked;
//! masked nodes hold the infinite sentinel and saturate every interpolation
//! that touches them. Off-grid queries are errors, never extrapolations.

use crate::error::CoreError;
use crate::tensor::Mat;
use crate::Result;

/// One axis of a matrix grid: nodes at `min + i·step` for `i < count`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridAxis {
    pub min: f64,
    pub step: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn max(&self) -> f64 {
        self.min + self.step * (self.count - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.min + self.step * i as f64
    }
}

/// Regular grid over 2×2 matrices with an optional determinant-positivity
/// mask.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MatrixGrid {
    pub axes: [GridAxis; 4],
    /// When set, nodes with `det F ≤ 0` are excluded (infinite sentinel).
    pub det_mask: bool,
}

impl MatrixGrid {
    pub fn new(axes: [GridAxis; 4], det_mask: bool) -> Result<MatrixGrid> {
        for ax in &axes {
            if !(ax.step > 0.0) || ax.count < 2 {
                return Err(CoreError::InvalidParameter(format!(
                    "grid axis needs step > 0 and at least 2 nodes, got {ax:?}"
                )));
            }
        }
        Ok(MatrixGrid { axes, det_mask })
    }

    /// Cube grid `[-extent, extent]^4` with `count` nodes per axis.
    pub fn symmetric(extent: f64, count: usize, det_mask: bool) -> Result<MatrixGrid> {
        let step = 2.0 * extent / (count - 1) as f64;
        let ax = GridAxis {
            min: -extent,
            step,
            count,
        };
        MatrixGrid::new([ax; 4], det_mask)
    }

    /// Grid covering the given matrices with a margin of `margin` times the
    /// largest pairwise separation (at least one separation of margin on
    /// every side), `count` nodes per axis. Node spacing is chosen so the
    /// covered matrices land exactly on nodes when they differ by multiples
    /// of the resulting step.
    pub fn covering(matrices: &[Mat], margin: f64, count: usize, det_mask: bool) -> Result<MatrixGrid> {
        if matrices.is_empty() {
            return Err(CoreError::InvalidParameter("no matrices to cover".into()));
        }
        let mut sep = 0.0f64;
        for a in matrices {
            for b in matrices {
                sep = sep.max(a.sub(b).norm());
            }
        }
        if sep == 0.0 {
            sep = 1.0;
        }
        let pad = margin * sep;
        let mut axes = [GridAxis {
            min: 0.0,
            step: 1.0,
            count,
        }; 4];
        for (axis, ax) in axes.iter_mut().enumerate() {
            let (i, j) = (axis / 2, axis % 2);
            let lo = matrices.iter().map(|m| m.e(i, j)).fold(f64::INFINITY, f64::min) - pad;
            let hi = matrices.iter().map(|m| m.e(i, j)).fold(f64::NEG_INFINITY, f64::max) + pad;
            ax.min = lo;
            ax.step = (hi - lo) / (count - 1) as f64;
        }
        MatrixGrid::new(axes, det_mask)
    }

    pub fn node_count(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    /// Row-major strides: last axis fastest.
    fn strides(&self) -> [usize; 4] {
        let c = &self.axes;
        [
            c[1].count * c[2].count * c[3].count,
            c[2].count * c[3].count,
            c[3].count,
            1,
        ]
    }

    pub fn flat(&self, multi: [usize; 4]) -> usize {
        let s = self.strides();
        multi.iter().zip(s.iter()).map(|(m, s)| m * s).sum()
    }

    pub fn multi(&self, mut flat: usize) -> [usize; 4] {
        let s = self.strides();
        let mut out = [0usize; 4];
        for k in 0..4 {
            out[k] = flat / s[k];
            flat %= s[k];
        }
        out
    }

    pub fn matrix_at(&self, flat: usize) -> Mat {
        let m = self.multi(flat);
        Mat::D2([
            [self.axes[0].node(m[0]), self.axes[1].node(m[1])],
            [self.axes[2].node(m[2]), self.axes[3].node(m[3])],
        ])
    }

    /// Whether the node is excluded by the determinant mask.
    pub fn masked(&self, flat: usize) -> bool {
        self.det_mask && self.matrix_at(flat).det() <= 0.0
    }

    /// Smallest axis step; the natural segment-step scale for lamination.
    pub fn min_step(&self) -> f64 {
        self.axes.iter().map(|a| a.step).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, f: &Mat) -> bool {
        let x = [f.e(0, 0), f.e(0, 1), f.e(1, 0), f.e(1, 1)];
        self.axes
            .iter()
            .zip(x.iter())
            .all(|(ax, &v)| v >= ax.min - 1e-12 * ax.step && v <= ax.max() + 1e-12 * ax.step)
    }

    /// Nearest node to `f`, when `f` is inside the grid.
    pub fn nearest_node(&self, f: &Mat) -> Result<usize> {
        if !self.contains(f) {
            return Err(CoreError::OutsideGrid {
                point: f.entries(),
            });
        }
        let x = [f.e(0, 0), f.e(0, 1), f.e(1, 0), f.e(1, 1)];
        let mut multi = [0usize; 4];
        for k in 0..4 {
            let ax = &self.axes[k];
            let i = ((x[k] - ax.min) / ax.step).round() as isize;
            multi[k] = i.clamp(0, ax.count as isize - 1) as usize;
        }
        Ok(self.flat(multi))
    }

    /// Multilinear interpolation of nodal values at `f`.
    ///
    /// Any infinite corner with nonvanishing weight saturates the result.
    /// Queries outside the grid are an error.
    pub fn interpolate(&self, values: &[f64], f: &Mat) -> Result<f64> {
        match self.interpolate_opt(values, f) {
            Some(v) => Ok(v),
            None => Err(CoreError::OutsideGrid {
                point: f.entries(),
            }),
        }
    }

    /// Interpolation returning `None` outside the grid (hot path for the
    /// lamination sweep, where out-of-grid candidates are simply skipped).
    #[inline]
    pub fn interpolate_opt(&self, values: &[f64], f: &Mat) -> Option<f64> {
        let x = [f.e(0, 0), f.e(0, 1), f.e(1, 0), f.e(1, 1)];
        let mut base = [0usize; 4];
        let mut frac = [0.0f64; 4];
        for k in 0..4 {
            let ax = &self.axes[k];
            let t = (x[k] - ax.min) / ax.step;
            if t < -1e-9 || t > (ax.count - 1) as f64 + 1e-9 {
                return None;
            }
            let mut i = t.floor() as isize;
            i = i.clamp(0, ax.count as isize - 2);
            base[k] = i as usize;
            frac[k] = (t - i as f64).clamp(0.0, 1.0);
        }
        let s = self.strides();
        let origin = self.flat(base);
        let mut acc = 0.0;
        for corner in 0..16usize {
            let mut w = 1.0;
            let mut idx = origin;
            for k in 0..4 {
                if corner >> k & 1 == 1 {
                    w *= frac[k];
                    idx += s[k];
                } else {
                    w *= 1.0 - frac[k];
                }
            }
            if w == 0.0 {
                continue;
            }
            let v = values[idx];
            if v == f64::INFINITY {
                if w > 1e-14 {
                    return Some(f64::INFINITY);
                }
                continue;
            }
            acc += w * v;
        }
        Some(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn flat_multi_roundtrip() {
        let g = MatrixGrid::symmetric(1.0, 5, false).unwrap();
        for flat in [0usize, 1, 17, 311, 624] {
            assert_eq!(g.flat(g.multi(flat)), flat);
        }
        assert_eq!(g.node_count(), 625);
    }

    #[test]
    fn interpolation_reproduces_multilinear_functions() {
        // det is multilinear in the four entries, so interpolation of nodal
        // determinants is exact
        let g = MatrixGrid::symmetric(2.0, 7, false).unwrap();
        let dets: Vec<f64> = (0..g.node_count()).map(|i| g.matrix_at(i).det()).collect();
        let f = Mat::D2([[0.37, -1.2], [0.85, 1.61]]);
        assert_abs_diff_eq!(g.interpolate(&dets, &f).unwrap(), f.det(), epsilon = 1e-12);
    }

    #[test]
    fn outside_grid_errors() {
        let g = MatrixGrid::symmetric(1.0, 5, false).unwrap();
        let values = vec![0.0; g.node_count()];
        let f = Mat::D2([[2.0, 0.0], [0.0, 0.0]]);
        assert!(g.interpolate(&values, &f).is_err());
    }

    #[test]
    fn infinite_corner_saturates() {
        let g = MatrixGrid::symmetric(1.0, 3, false).unwrap();
        let mut values = vec![0.0; g.node_count()];
        values[0] = f64::INFINITY;
        let corner = g.matrix_at(0);
        // query right at the infinite corner
        assert_eq!(g.interpolate(&values, &corner).unwrap(), f64::INFINITY);
        // far corner is clean
        let far = g.matrix_at(g.node_count() - 1);
        assert_eq!(g.interpolate(&values, &far).unwrap(), 0.0);
    }

    #[test]
    fn covering_includes_wells_with_margin() {
        let a = Mat::diag(&[0.8, 1.0]);
        let b = Mat::diag(&[1.2, 1.0]);
        let g = MatrixGrid::covering(&[a, b], 1.0, 9, true).unwrap();
        assert!(g.contains(&a) && g.contains(&b));
        let sep = a.sub(&b).norm();
        assert!(g.axes[0].min <= 0.8 - sep + 1e-12);
        assert!(g.axes[0].max() >= 1.2 + sep - 1e-12);
    }
}
