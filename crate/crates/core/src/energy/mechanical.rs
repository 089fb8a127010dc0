use std::sync::Arc;

use crate::energy::{
    Energy, MechanicalDensity, ModelConditions, Modulus, Theta, INCOMPRESSIBLE_DET_TOL,
};
use crate::error::CoreError;
use crate::tensor::{step_tensor, Director, Mat, Vector};
use crate::Result;

/// Isotropic compressible base model `W₀(F) = |F|ᵖ + θ(det F)`.
#[derive(Clone)]
pub struct CompressibleW0 {
    dim: usize,
    p: f64,
    theta: Theta,
    conditions: ModelConditions,
}

/// `W₀(F) = |F|ᵖ + θ(det F)` with `θ(t) = tᵃ + t⁻ᵇ` on `t > 0`, extended by
/// infinity to `det F ≤ 0`.
///
/// Requires `p > n − 1`, `a ≥ 2` and `b ≥ q′ − 1`, where `q = p/(n−1)` is
/// the declared cofactor exponent.
pub fn make_w0_compressible(dim: usize, p: f64, a: f64, b: f64) -> Result<CompressibleW0> {
    let q = p / (dim as f64 - 1.0);
    if !(q > 1.0) {
        return Err(CoreError::InvalidParameter(format!(
            "p = {p} gives cofactor exponent q = {q} <= 1"
        )));
    }
    let q_prime = q / (q - 1.0);
    if !(a >= 2.0) {
        return Err(CoreError::InvalidParameter(format!("need a >= 2, got {a}")));
    }
    if !(b >= q_prime - 1.0) {
        return Err(CoreError::InvalidParameter(format!(
            "need b >= q' - 1 = {}, got {b}",
            q_prime - 1.0
        )));
    }
    let theta = Theta::new(a, b);
    let conditions = ModelConditions {
        p,
        q,
        s: 2.0,
        c: 4.0,
        theta: Some(theta),
        modulus: Modulus::Zero,
    };
    conditions.validate(dim)?;
    Ok(CompressibleW0 {
        dim,
        p,
        theta,
        conditions,
    })
}

impl MechanicalDensity for CompressibleW0 {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, f: &Mat, _n: &Director) -> Energy {
        Energy::Finite(f.norm().powf(self.p)).add(self.theta.eval(f.det()))
    }

    fn grad_f(&self, f: &Mat, _n: &Director) -> Option<Mat> {
        let d = f.det();
        if d <= 0.0 {
            return None;
        }
        let norm = f.norm();
        let elastic = if norm > 0.0 {
            f.scale(self.p * norm.powf(self.p - 2.0))
        } else {
            Mat::zero(self.dim)
        };
        Some(elastic.add(&f.cof().scale(self.theta.deriv(d))))
    }

    fn conditions(&self) -> &ModelConditions {
        &self.conditions
    }

    fn depends_on_director(&self) -> bool {
        false
    }
}

/// Nematic composition `W(F, n) = W₀(S F)` with the step tensor
/// `S = α⁻¹ n⊗n + √α (I − n⊗n)`.
pub struct NematicMechanical {
    base: Arc<dyn MechanicalDensity>,
    alpha: f64,
    conditions: ModelConditions,
}

/// Compose an isotropic base density with the volume-preserving uniaxial
/// stretch of amplitude `α⁻¹` along the director.
///
/// No analytic modulus of continuity in `n` is known for the composition;
/// the conditions declare an empirical modulus, fitted by
/// [`check_conditions`](crate::energy::check_conditions).
pub fn make_nematic_mechanical(
    base: Arc<dyn MechanicalDensity>,
    alpha: f64,
) -> Result<NematicMechanical> {
    if !(alpha > 0.0) {
        return Err(CoreError::InvalidParameter(format!(
            "step amplitude alpha must be positive, got {alpha}"
        )));
    }
    let mut conditions = base.conditions().clone();
    conditions.modulus = Modulus::Empirical;
    // The step tensor distorts norms by at most max(1/alpha, sqrt(alpha));
    // fold that into the declared constant.
    let distortion = (1.0 / alpha).max(alpha.sqrt());
    conditions.c *= distortion.powf(conditions.p).max(1.0 / distortion.powf(conditions.p)).max(1.0)
        * 2.0;
    Ok(NematicMechanical {
        base,
        alpha,
        conditions,
    })
}

impl MechanicalDensity for NematicMechanical {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn eval(&self, f: &Mat, n: &Director) -> Energy {
        let s = step_tensor(n, self.alpha).expect("alpha validated at construction");
        self.base.eval(&s.mul(f), n)
    }

    fn grad_f(&self, f: &Mat, n: &Director) -> Option<Mat> {
        let s = step_tensor(n, self.alpha).expect("alpha validated at construction");
        let inner = self.base.grad_f(&s.mul(f), n)?;
        // d/dF W0(S F) = S^T (∇W0)(S F)
        Some(s.transpose().mul(&inner))
    }

    fn conditions(&self) -> &ModelConditions {
        &self.conditions
    }

    fn incompressible(&self) -> bool {
        self.base.incompressible()
    }
}

/// Two-well fixture whose lamination envelope lies strictly below the
/// density between the wells.
///
/// `W(F, n) = min(|F−A|², |F−B|²)·(1 + κ d(n, n₀)²) + ε|F|ᵖ + θ(det F)`
/// where `d(n, n₀)² = 1 − (n·n₀)²` is the head-to-tail invariant director
/// distance.
pub struct DoubleWell {
    well_a: Mat,
    well_b: Mat,
    kappa: f64,
    n0: Director,
    theta: Theta,
    eps_growth: f64,
    conditions: ModelConditions,
}

/// Build the double-well fixture. The wells should be rank-one connected
/// with positive determinants; a rank-one defect only warns, the density
/// stays usable.
pub fn make_double_well(
    well_a: Mat,
    well_b: Mat,
    kappa: f64,
    n0: Director,
    theta: Theta,
    eps_growth: f64,
) -> Result<DoubleWell> {
    let dim = well_a.dim();
    if dim != well_b.dim() || dim != n0.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: dim,
            got: well_b.dim().min(n0.dim()),
        });
    }
    if well_a.det() <= 0.0 || well_b.det() <= 0.0 {
        return Err(CoreError::InvalidParameter(
            "double-well matrices must have positive determinant".into(),
        ));
    }
    if kappa < 0.0 || eps_growth < 0.0 {
        return Err(CoreError::InvalidParameter(
            "kappa and the growth term must be nonnegative".into(),
        ));
    }
    let diff = well_b.sub(&well_a);
    let rank_one = match dim {
        2 => diff.det().abs() <= 1e-10 * (1.0 + diff.norm().powi(2)),
        _ => diff.cof().norm() <= 1e-10 * (1.0 + diff.norm().powi(2)),
    };
    if !rank_one {
        log::warn!("double-well matrices are not rank-one connected; lamination between the wells will not reach the determinant floor");
    }
    let p = 2.0;
    let conditions = ModelConditions {
        p,
        q: p / (dim as f64 - 1.0).max(1.0),
        s: 2.0,
        c: (8.0 * (1.0 + kappa) * (1.0 + well_a.norm() + well_b.norm()).powi(2)).max(4.0),
        theta: Some(theta),
        modulus: if kappa == 0.0 {
            Modulus::Zero
        } else {
            // |d(n,n0)^2 - d(m,n0)^2| = |(n.n0)^2 - (m.n0)^2| <= 2|n - m|
            Modulus::Linear(2.0 * kappa)
        },
    };
    Ok(DoubleWell {
        well_a,
        well_b,
        kappa,
        n0,
        theta,
        eps_growth,
        conditions,
    })
}

impl DoubleWell {
    pub fn wells(&self) -> (&Mat, &Mat) {
        (&self.well_a, &self.well_b)
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    fn director_factor(&self, n: &Director) -> f64 {
        let c = n.vector().dot(self.n0.vector());
        1.0 + self.kappa * (1.0 - c * c)
    }
}

impl MechanicalDensity for DoubleWell {
    fn dim(&self) -> usize {
        self.well_a.dim()
    }

    fn eval(&self, f: &Mat, n: &Director) -> Energy {
        let da = f.sub(&self.well_a).norm().powi(2);
        let db = f.sub(&self.well_b).norm().powi(2);
        let well = da.min(db) * self.director_factor(n);
        let growth = if self.eps_growth > 0.0 {
            self.eps_growth * f.norm().powf(self.conditions.p)
        } else {
            0.0
        };
        Energy::Finite(well + growth).add(self.theta.eval(f.det()))
    }

    fn grad_f(&self, f: &Mat, n: &Director) -> Option<Mat> {
        let d = f.det();
        if d <= 0.0 {
            return None;
        }
        let da = f.sub(&self.well_a).norm().powi(2);
        let db = f.sub(&self.well_b).norm().powi(2);
        let nearest = if da <= db { &self.well_a } else { &self.well_b };
        let mut g = f
            .sub(nearest)
            .scale(2.0 * self.director_factor(n));
        if self.eps_growth > 0.0 {
            let norm = f.norm();
            if norm > 0.0 {
                g = g.add(&f.scale(self.eps_growth * self.conditions.p * norm.powf(self.conditions.p - 2.0)));
            }
        }
        Some(g.add(&f.cof().scale(self.theta.deriv(d))))
    }

    fn grad_n(&self, f: &Mat, n: &Director) -> Option<Vector> {
        let da = f.sub(&self.well_a).norm().powi(2);
        let db = f.sub(&self.well_b).norm().powi(2);
        let c = n.vector().dot(self.n0.vector());
        // d/dn of kappa (1 - (n.n0)^2) = -2 kappa (n.n0) n0
        Some(self.n0.vector().scale(-2.0 * self.kappa * c * da.min(db)))
    }

    fn conditions(&self) -> &ModelConditions {
        &self.conditions
    }

    fn depends_on_director(&self) -> bool {
        self.kappa != 0.0
    }
}

/// Kohn–Strang validation fixture: `W(F) = 1 + |F|²` for `F ≠ 0`, `W(0) = 0`.
///
/// Defined on all matrices (no determinant constraint); its quasiconvex
/// envelope has a closed form against which the lamination iteration is
/// validated.
pub struct KohnStrang {
    conditions: ModelConditions,
}

pub fn make_kohn_strang() -> KohnStrang {
    KohnStrang {
        conditions: ModelConditions {
            p: 2.0,
            q: 2.0,
            s: 2.0,
            c: 2.0,
            theta: None,
            modulus: Modulus::Zero,
        },
    }
}

impl MechanicalDensity for KohnStrang {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, f: &Mat, _n: &Director) -> Energy {
        let norm2 = f.dot(f);
        if norm2 == 0.0 {
            Energy::Finite(0.0)
        } else {
            Energy::Finite(1.0 + norm2)
        }
    }

    fn grad_f(&self, f: &Mat, _n: &Director) -> Option<Mat> {
        if f.dot(f) == 0.0 {
            None
        } else {
            Some(f.scale(2.0))
        }
    }

    fn conditions(&self) -> &ModelConditions {
        &self.conditions
    }

    fn unconstrained(&self) -> bool {
        true
    }

    fn depends_on_director(&self) -> bool {
        false
    }
}

/// Incompressible model `W(F, n) = |F|ᵖ` on `|det F − 1| ≤ 1e−8`, infinite
/// elsewhere.
pub struct IncompressibleW1 {
    dim: usize,
    p: f64,
    conditions: ModelConditions,
}

pub fn make_w1_incompressible(dim: usize, p: f64) -> Result<IncompressibleW1> {
    let conditions = ModelConditions {
        p,
        q: (p / (dim as f64 - 1.0)).max(1.5),
        s: 2.0,
        c: 2.0,
        theta: None,
        modulus: Modulus::Zero,
    };
    conditions.validate(dim)?;
    Ok(IncompressibleW1 { dim, p, conditions })
}

impl MechanicalDensity for IncompressibleW1 {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, f: &Mat, _n: &Director) -> Energy {
        if (f.det() - 1.0).abs() <= INCOMPRESSIBLE_DET_TOL {
            Energy::Finite(f.norm().powf(self.p))
        } else {
            Energy::Infinite
        }
    }

    fn grad_f(&self, f: &Mat, _n: &Director) -> Option<Mat> {
        if (f.det() - 1.0).abs() > INCOMPRESSIBLE_DET_TOL {
            return None;
        }
        let norm = f.norm();
        if norm == 0.0 {
            return Some(Mat::zero(self.dim));
        }
        Some(f.scale(self.p * norm.powf(self.p - 2.0)))
    }

    fn conditions(&self) -> &ModelConditions {
        &self.conditions
    }

    fn incompressible(&self) -> bool {
        true
    }

    fn depends_on_director(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn w0_at_identity() {
        // |I|^p = n^{p/2}, theta(1) = 2
        let w2 = make_w0_compressible(2, 4.0, 2.0, 2.0).unwrap();
        let n = Director::axis(2, 0);
        assert_abs_diff_eq!(
            w2.eval(&Mat::identity(2), &n).to_f64(),
            2.0f64.powi(2) + 2.0,
            epsilon = 1e-12
        );

        let w3 = make_w0_compressible(3, 3.0, 2.0, 2.0).unwrap();
        let n3 = Director::axis(3, 0);
        assert_abs_diff_eq!(
            w3.eval(&Mat::identity(3), &n3).to_f64(),
            3.0f64.powf(1.5) + 2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn w0_infinite_at_nonpositive_det() {
        let w = make_w0_compressible(2, 2.0, 2.0, 2.0).unwrap();
        let n = Director::axis(2, 0);
        assert_eq!(w.eval(&Mat::diag(&[1.0, -1.0]), &n), Energy::Infinite);
        assert_eq!(w.eval(&Mat::diag(&[1.0, 0.0]), &n), Energy::Infinite);
    }

    #[test]
    fn w0_rejects_bad_exponents() {
        assert!(make_w0_compressible(2, 2.0, 1.0, 2.0).is_err());
        assert!(make_w0_compressible(2, 1.0, 2.0, 2.0).is_err());
    }

    #[test]
    fn nematic_composition() {
        let base = Arc::new(make_w0_compressible(3, 3.0, 2.0, 2.0).unwrap());
        let n = Director::axis(3, 0);

        // alpha = 1 collapses the step tensor to the identity
        let w1 = make_nematic_mechanical(base.clone(), 1.0).unwrap();
        let f = Mat::D3([[1.0, 0.2, 0.0], [0.0, 1.0, 0.3], [0.1, 0.0, 1.0]]);
        assert_abs_diff_eq!(
            w1.eval(&f, &n).to_f64(),
            base.eval(&f, &n).to_f64(),
            epsilon = 1e-12
        );

        // composition with a diagonal step tensor at F = I
        let w4 = make_nematic_mechanical(base.clone(), 4.0).unwrap();
        let expected = base
            .eval(&Mat::diag(&[0.25, 2.0, 2.0]), &n)
            .to_f64();
        assert_abs_diff_eq!(w4.eval(&Mat::identity(3), &n).to_f64(), expected, epsilon = 1e-12);

        // head-to-tail symmetry is exact: the step tensor is even in n
        let m = Director::new(Vector::D3([0.6, -0.3, 0.74])).unwrap();
        let f = Mat::D3([[1.1, 0.2, 0.0], [0.0, 0.9, 0.3], [0.1, 0.0, 1.2]]);
        assert_eq!(w4.eval(&f, &m), w4.eval(&f, &m.flipped()));
    }

    #[test]
    fn double_well_at_wells() {
        let a = Mat::diag(&[0.8, 1.0]);
        let b = Mat::diag(&[1.2, 1.0]);
        let n0 = Director::axis(2, 0);
        let theta = Theta::with_weight(2.0, 2.0, 0.1);
        let w = make_double_well(a, b, 0.5, n0, theta, 0.0).unwrap();
        assert_abs_diff_eq!(
            w.eval(&a, &n0).to_f64(),
            theta.eval(a.det()).to_f64(),
            epsilon = 1e-12
        );
        // symmetric under n -> -n even with director coupling
        let n = Director::from_angle(0.7);
        let f = Mat::D2([[1.05, 0.1], [0.0, 0.95]]);
        assert_eq!(w.eval(&f, &n), w.eval(&f, &n.flipped()));
    }

    #[test]
    fn kohn_strang_values() {
        let w = make_kohn_strang();
        let n = Director::axis(2, 0);
        assert_eq!(w.eval(&Mat::zero(2), &n), Energy::Finite(0.0));
        assert_eq!(w.eval(&Mat::identity(2), &n), Energy::Finite(3.0));
        assert!(w.unconstrained());
    }

    #[test]
    fn incompressible_gate() {
        let w = make_w1_incompressible(2, 2.0).unwrap();
        let n = Director::axis(2, 0);
        assert!(w.eval(&Mat::identity(2), &n).is_finite());
        assert_eq!(w.eval(&Mat::diag(&[2.0, 1.0]), &n), Energy::Infinite);
        assert!(w.incompressible());
    }
}
