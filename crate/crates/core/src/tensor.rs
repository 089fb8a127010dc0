//! Exact dense tensor algebra in dimensions 2 and 3.
//!
//! Everything here is closed-form: determinants, adjugates/cofactors, the
//! minors vector with the determinant in the last slot, director tensors
//! `n ⊗ n`, the nematic step tensor and tangent-space projections. Values are
//! immutable after construction and safe to share between threads.

use crate::error::CoreError;
use crate::Result;

/// Square matrix of dimension 2 or 3, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mat {
    D2([[f64; 2]; 2]),
    D3([[f64; 3]; 3]),
}

/// Vector of dimension 2 or 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Vector {
    D2([f64; 2]),
    D3([f64; 3]),
}

/// Unit vector; renormalized on construction.
///
/// Construction rejects vectors with norm below `1e-8` (interpolated
/// directors drift off the sphere and are rescaled, but a near-zero vector
/// carries no direction information).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Director(Vector);

/// Minors vector `M(F)`: the matrix entries (row-major), for dimension 3 the
/// cofactor entries (row-major), and the determinant in the last component.
#[derive(Debug, Clone, PartialEq)]
pub struct Minors {
    values: Vec<f64>,
}

impl Mat {
    pub fn dim(&self) -> usize {
        match self {
            Mat::D2(_) => 2,
            Mat::D3(_) => 3,
        }
    }

    pub fn identity(dim: usize) -> Mat {
        match dim {
            2 => Mat::D2([[1.0, 0.0], [0.0, 1.0]]),
            3 => Mat::D3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]),
            _ => panic!("unsupported dimension {dim}"),
        }
    }

    pub fn zero(dim: usize) -> Mat {
        match dim {
            2 => Mat::D2([[0.0; 2]; 2]),
            3 => Mat::D3([[0.0; 3]; 3]),
            _ => panic!("unsupported dimension {dim}"),
        }
    }

    pub fn diag(entries: &[f64]) -> Mat {
        match entries.len() {
            2 => Mat::D2([[entries[0], 0.0], [0.0, entries[1]]]),
            3 => Mat::D3([
                [entries[0], 0.0, 0.0],
                [0.0, entries[1], 0.0],
                [0.0, 0.0, entries[2]],
            ]),
            n => panic!("unsupported dimension {n}"),
        }
    }

    pub fn e(&self, i: usize, j: usize) -> f64 {
        match self {
            Mat::D2(a) => a[i][j],
            Mat::D3(a) => a[i][j],
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        match self {
            Mat::D2(a) => a[i][j] = v,
            Mat::D3(a) => a[i][j] = v,
        }
    }

    /// Row-major entries.
    pub fn entries(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.e(i, j));
            }
        }
        out
    }

    pub fn from_entries(dim: usize, entries: &[f64]) -> Result<Mat> {
        if entries.len() != dim * dim {
            return Err(CoreError::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let mut m = Mat::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, entries[i * dim + j]);
            }
        }
        Ok(m)
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Mat {
        let n = self.dim();
        let mut t = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                t.set(i, j, self.e(j, i));
            }
        }
        t
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Mat {
        self.map(|a| a * s)
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Mat {
        let n = self.dim();
        let mut out = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, f(self.e(i, j)));
            }
        }
        out
    }

    fn zip(&self, other: &Mat, f: impl Fn(f64, f64) -> f64) -> Mat {
        let n = self.dim();
        assert_eq!(n, other.dim(), "matrix dimension mismatch");
        let mut out = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, f(self.e(i, j), other.e(i, j)));
            }
        }
        out
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Mat) -> Mat {
        let n = self.dim();
        assert_eq!(n, other.dim(), "matrix dimension mismatch");
        let mut out = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += self.e(i, k) * other.e(k, j);
                }
                out.set(i, j, s);
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &Vector) -> Vector {
        let n = self.dim();
        assert_eq!(n, v.dim(), "matrix/vector dimension mismatch");
        let mut out = vec![0.0; n];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..n {
                *o += self.e(i, j) * v.component(j);
            }
        }
        Vector::from_slice(&out)
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &Mat) -> f64 {
        let n = self.dim();
        assert_eq!(n, other.dim(), "matrix dimension mismatch");
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.e(i, j) * other.e(i, j);
            }
        }
        s
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Closed-form determinant.
    pub fn det(&self) -> f64 {
        match self {
            Mat::D2(a) => a[0][0] * a[1][1] - a[0][1] * a[1][0],
            Mat::D3(a) => {
                a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                    - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                    + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
            }
        }
    }

    /// Adjugate matrix, satisfying `F · adj F = det(F) · I`.
    pub fn adj(&self) -> Mat {
        match self {
            Mat::D2(a) => Mat::D2([[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]),
            Mat::D3(a) => {
                let c = |i1: usize, i2: usize, j1: usize, j2: usize| {
                    a[i1][j1] * a[i2][j2] - a[i1][j2] * a[i2][j1]
                };
                // adj(A)_{ij} = (-1)^{i+j} * minor_{ji}
                Mat::D3([
                    [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
                    [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
                    [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
                ])
            }
        }
    }

    /// Cofactor matrix: the transpose of the adjugate.
    pub fn cof(&self) -> Mat {
        self.adj().transpose()
    }

    /// Inverse; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Mat> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(self.adj().scale(1.0 / d))
    }

    /// Tensor (outer) product `a ⊗ b`.
    pub fn outer(a: &Vector, b: &Vector) -> Mat {
        let n = a.dim();
        assert_eq!(n, b.dim(), "vector dimension mismatch");
        let mut out = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, a.component(i) * b.component(j));
            }
        }
        out
    }

    /// Trace.
    pub fn trace(&self) -> f64 {
        let n = self.dim();
        (0..n).map(|i| self.e(i, i)).sum()
    }
}

impl Vector {
    pub fn dim(&self) -> usize {
        match self {
            Vector::D2(_) => 2,
            Vector::D3(_) => 3,
        }
    }

    pub fn zero(dim: usize) -> Vector {
        match dim {
            2 => Vector::D2([0.0; 2]),
            3 => Vector::D3([0.0; 3]),
            _ => panic!("unsupported dimension {dim}"),
        }
    }

    pub fn basis(dim: usize, axis: usize) -> Vector {
        let mut v = Vector::zero(dim);
        v.set(axis, 1.0);
        v
    }

    pub fn from_slice(s: &[f64]) -> Vector {
        match s.len() {
            2 => Vector::D2([s[0], s[1]]),
            3 => Vector::D3([s[0], s[1], s[2]]),
            n => panic!("unsupported dimension {n}"),
        }
    }

    pub fn component(&self, i: usize) -> f64 {
        match self {
            Vector::D2(v) => v[i],
            Vector::D3(v) => v[i],
        }
    }

    pub fn set(&mut self, i: usize, x: f64) {
        match self {
            Vector::D2(v) => v[i] = x,
            Vector::D3(v) => v[i] = x,
        }
    }

    pub fn components(&self) -> Vec<f64> {
        match self {
            Vector::D2(v) => v.to_vec(),
            Vector::D3(v) => v.to_vec(),
        }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Vector {
        let mut out = *self;
        for i in 0..self.dim() {
            out.set(i, self.component(i) * s);
        }
        out
    }

    fn zip(&self, other: &Vector, f: impl Fn(f64, f64) -> f64) -> Vector {
        let n = self.dim();
        assert_eq!(n, other.dim(), "vector dimension mismatch");
        let mut out = Vector::zero(n);
        for i in 0..n {
            out.set(i, f(self.component(i), other.component(i)));
        }
        out
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        let n = self.dim();
        assert_eq!(n, other.dim(), "vector dimension mismatch");
        (0..n).map(|i| self.component(i) * other.component(i)).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Counter-clockwise perpendicular, dimension 2 only.
    pub fn perp(&self) -> Vector {
        match self {
            Vector::D2(v) => Vector::D2([-v[1], v[0]]),
            Vector::D3(_) => panic!("perp is only defined in dimension 2"),
        }
    }

    /// Cross product, dimension 3 only.
    pub fn cross(&self, other: &Vector) -> Vector {
        match (self, other) {
            (Vector::D3(a), Vector::D3(b)) => Vector::D3([
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]),
            _ => panic!("cross product is only defined in dimension 3"),
        }
    }
}

impl Director {
    /// Build a director from an arbitrary vector, renormalizing it.
    pub fn new(v: Vector) -> Result<Director> {
        let norm = v.norm();
        if !norm.is_finite() || norm < 1e-8 {
            return Err(CoreError::DegenerateDirector { norm });
        }
        Ok(Director(v.scale(1.0 / norm)))
    }

    /// Director along a coordinate axis.
    pub fn axis(dim: usize, axis: usize) -> Director {
        Director(Vector::basis(dim, axis))
    }

    /// Planar director at the given angle (dimension 2).
    pub fn from_angle(theta: f64) -> Director {
        Director(Vector::D2([theta.cos(), theta.sin()]))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn vector(&self) -> &Vector {
        &self.0
    }

    pub fn component(&self, i: usize) -> f64 {
        self.0.component(i)
    }

    pub fn flipped(&self) -> Director {
        Director(self.0.scale(-1.0))
    }

    /// The director tensor `n ⊗ n`; even in `n`, which encodes the
    /// head-to-tail symmetry at the tensor level.
    pub fn outer(&self) -> Mat {
        Mat::outer(&self.0, &self.0)
    }
}

impl Minors {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn det(&self) -> f64 {
        *self.values.last().expect("minors vector is never empty")
    }
}

/// Number of minors of an `n × n` matrix, with the spec's fixed ordering:
/// 5 for dimension 2, 19 for dimension 3.
pub fn minors_len(dim: usize) -> usize {
    match dim {
        2 => 5,
        3 => 19,
        _ => panic!("unsupported dimension {dim}"),
    }
}

/// The minors vector `M(F)` with the determinant in the last component.
///
/// Ordering: row-major entries of `F`, then (dimension 3) row-major entries
/// of `cof F`, then `det F`.
pub fn minors(f: &Mat) -> Minors {
    let mut values = f.entries();
    if f.dim() == 3 {
        values.extend(f.cof().entries());
    }
    values.push(f.det());
    Minors { values }
}

/// The minors vector without the determinant, `M₀(F)`.
pub fn minors_without_det(f: &Mat) -> Vec<f64> {
    let mut m = minors(f).values;
    m.pop();
    m
}

/// Determinant of `F` (alias matching the operation vocabulary).
pub fn det(f: &Mat) -> f64 {
    f.det()
}

/// Cofactor matrix of `F`.
pub fn cof(f: &Mat) -> Mat {
    f.cof()
}

/// The nematic step tensor `α⁻¹ n⊗n + √α (I − n⊗n)`: a volume-preserving
/// (in dimension 3) uniaxial stretch of amplitude `α⁻¹` along `n`.
pub fn step_tensor(n: &Director, alpha: f64) -> Result<Mat> {
    if !(alpha > 0.0) {
        return Err(CoreError::InvalidParameter(format!(
            "step tensor needs alpha > 0, got {alpha}"
        )));
    }
    let nn = n.outer();
    let id = Mat::identity(n.dim());
    Ok(nn.scale(1.0 / alpha).add(&id.sub(&nn).scale(alpha.sqrt())))
}

/// Orthogonal projection `P_z = I − z⊗z` onto the tangent space of the unit
/// sphere at `z`. Symmetric, idempotent, `P_z z = 0`, rank `n − 1`.
pub fn projection(z: &Director) -> Mat {
    Mat::identity(z.dim()).sub(&z.outer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn det_closed_forms() {
        assert_eq!(Mat::identity(2).det(), 1.0);
        assert_eq!(Mat::diag(&[2.0, 3.0]).det(), 6.0);
        assert_eq!(Mat::D2([[0.0, 1.0], [1.0, 0.0]]).det(), -1.0);
        assert_eq!(Mat::diag(&[2.0, 3.0, 4.0]).det(), 24.0);
    }

    #[test]
    fn cof_closed_forms() {
        let f = Mat::D2([[1.0, 2.0], [3.0, 4.0]]);
        assert_eq!(f.cof(), Mat::D2([[4.0, -3.0], [-2.0, 1.0]]));
        assert_eq!(Mat::identity(3).cof(), Mat::identity(3));
        assert_eq!(
            Mat::diag(&[2.0, 3.0, 4.0]).cof(),
            Mat::diag(&[12.0, 8.0, 6.0])
        );
    }

    #[test]
    fn minors_ordering_det_last() {
        let m = minors(&Mat::identity(2));
        assert_eq!(m.values(), &[1.0, 0.0, 0.0, 1.0, 1.0]);

        let m3 = minors(&Mat::identity(3));
        assert_eq!(m3.len(), 19);
        assert_eq!(m3.det(), 1.0);
        // nine entries of I, nine of cof I = I, then det = 1
        let id = Mat::identity(3).entries();
        assert_eq!(&m3.values()[0..9], id.as_slice());
        assert_eq!(&m3.values()[9..18], id.as_slice());

        let m0 = minors_without_det(&Mat::diag(&[2.0, 5.0]));
        assert_eq!(m0.len(), 4);
    }

    #[test]
    fn step_tensor_cases() {
        let e1 = Director::axis(2, 0);
        assert_eq!(step_tensor(&e1, 1.0).unwrap(), Mat::identity(2));

        let e1 = Director::axis(3, 0);
        let s = step_tensor(&e1, 4.0).unwrap();
        assert_eq!(s, Mat::diag(&[0.25, 2.0, 2.0]));
        assert_abs_diff_eq!(s.det(), 1.0, epsilon = 1e-14);

        assert!(step_tensor(&e1, 0.0).is_err());
        assert!(step_tensor(&e1, -2.0).is_err());
    }

    #[test]
    fn projection_cases() {
        let z = Director::axis(2, 0);
        assert_eq!(projection(&z), Mat::diag(&[0.0, 1.0]));

        let z = Director::new(Vector::D3([1.0, -2.0, 0.5])).unwrap();
        let p = projection(&z);
        // idempotent and kernel
        assert!(p.mul(&p).sub(&p).norm() < 1e-14);
        assert!(p.apply(z.vector()).norm() < 1e-14);
        // rank n-1: trace of a projection equals its rank
        assert_abs_diff_eq!(p.trace(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn director_renormalizes_and_rejects() {
        let d = Director::new(Vector::D2([3.0, 4.0])).unwrap();
        assert_abs_diff_eq!(d.vector().norm(), 1.0, epsilon = 1e-15);
        assert!(Director::new(Vector::D2([1e-9, 0.0])).is_err());
    }

    #[test]
    fn head_to_tail_at_tensor_level() {
        let n = Director::new(Vector::D3([0.3, -0.4, 0.87])).unwrap();
        let s1 = step_tensor(&n, 2.5).unwrap();
        let s2 = step_tensor(&n.flipped(), 2.5).unwrap();
        assert_eq!(s1, s2);
    }

    fn arb_mat(dim: usize) -> impl Strategy<Value = Mat> {
        prop::collection::vec(-10.0f64..10.0, dim * dim)
            .prop_map(move |v| Mat::from_entries(dim, &v).unwrap())
    }

    proptest! {
        #[test]
        fn adjugate_identity_2d(f in arb_mat(2)) {
            let lhs = f.mul(&f.adj());
            let rhs = Mat::identity(2).scale(f.det());
            prop_assert!(lhs.sub(&rhs).norm() < 1e-12 * (1.0 + f.norm().powi(2)));
        }

        #[test]
        fn adjugate_identity_3d(f in arb_mat(3)) {
            let lhs = f.mul(&f.adj());
            let rhs = Mat::identity(3).scale(f.det());
            prop_assert!(lhs.sub(&rhs).norm() < 1e-10 * (1.0 + f.norm().powi(3)));
        }

        #[test]
        fn det_of_cofactor(f in arb_mat(3)) {
            let lhs = f.cof().det();
            let rhs = f.det().powi(2);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
        }

        #[test]
        fn minors_last_is_det(f in arb_mat(2)) {
            prop_assert_eq!(minors(&f).det(), f.det());
        }
    }
}
