//! Mechanical densities `W(F, n)` and nematic densities `V(z, ζ)`.
//!
//! Mechanical densities take the value [`Energy::Infinite`] outside the
//! orientation-preserving cone `det F > 0` (or off `det F = 1` for
//! incompressible models); arithmetic with the infinite sentinel saturates,
//! so an infinite value can never be lost to overflow or win a minimum.
//!
//! Each shipped model carries [`ModelConditions`] describing the growth
//! exponents and constants under which it satisfies the coercivity,
//! head-to-tail symmetry and modulus-of-continuity hypotheses; the
//! [`checks`] submodule verifies those clauses by sampling.

mod checks;
mod mechanical;
mod nematic;

pub use checks::{check_conditions, check_nematic_conditions, ClauseResult, ConditionReport};
pub use mechanical::{
    make_double_well, make_kohn_strang, make_nematic_mechanical, make_w0_compressible,
    make_w1_incompressible, CompressibleW0, DoubleWell, IncompressibleW1, KohnStrang,
    NematicMechanical,
};
pub use nematic::{
    make_one_constant, make_oseen_frank, make_tangent_double_well, OneConstant, OseenFrank,
    TangentDoubleWell,
};

use crate::error::CoreError;
use crate::tensor::{Director, Mat};
use crate::Result;

/// Extended-real energy value with saturating arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Energy {
    Finite(f64),
    Infinite,
}

impl Energy {
    pub fn is_finite(&self) -> bool {
        matches!(self, Energy::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            Energy::Finite(v) => Some(*v),
            Energy::Infinite => None,
        }
    }

    /// Saturating representation as `f64` (`+∞` for the infinite sentinel).
    pub fn to_f64(&self) -> f64 {
        match self {
            Energy::Finite(v) => *v,
            Energy::Infinite => f64::INFINITY,
        }
    }

    pub fn from_f64(v: f64) -> Energy {
        if v.is_finite() {
            Energy::Finite(v)
        } else {
            Energy::Infinite
        }
    }

    pub fn add(self, other: Energy) -> Energy {
        match (self, other) {
            (Energy::Finite(a), Energy::Finite(b)) => Energy::from_f64(a + b),
            _ => Energy::Infinite,
        }
    }

    /// Scale by a nonnegative factor; `0 · ∞` saturates to `∞` so that a
    /// vanishing weight can never hide an inadmissible state.
    pub fn scale(self, s: f64) -> Energy {
        debug_assert!(s >= 0.0);
        match self {
            Energy::Finite(v) => Energy::from_f64(v * s),
            Energy::Infinite => Energy::Infinite,
        }
    }

    pub fn min(self, other: Energy) -> Energy {
        match (self, other) {
            (Energy::Finite(a), Energy::Finite(b)) => Energy::Finite(a.min(b)),
            (Energy::Finite(a), Energy::Infinite) => Energy::Finite(a),
            (Energy::Infinite, b) => b,
        }
    }

    /// Convex combination `λ·self + (1−λ)·other`, saturating.
    pub fn combine(lambda: f64, a: Energy, b: Energy) -> Energy {
        match (a, b) {
            (Energy::Finite(x), Energy::Finite(y)) => {
                Energy::from_f64(lambda * x + (1.0 - lambda) * y)
            }
            _ => Energy::Infinite,
        }
    }
}

/// The coercivity profile `θ(t) = w·(tᵃ + t⁻ᵇ)` for `t > 0`, infinite
/// otherwise.
///
/// Convex for `a ≥ 1`, with `θ(t) → ∞` as `t ↘ 0` and `θ(t)/t → ∞` as
/// `t → ∞`, and submultiplicative up to constants. The weight scales the
/// determinant penalty relative to the elastic part of a model.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Theta {
    pub a: f64,
    pub b: f64,
    #[serde(default = "default_weight")]
    pub weight: f64,
}

fn default_weight() -> f64 {
    1.0
}

impl Theta {
    pub fn new(a: f64, b: f64) -> Theta {
        Theta { a, b, weight: 1.0 }
    }

    pub fn with_weight(a: f64, b: f64, weight: f64) -> Theta {
        Theta { a, b, weight }
    }

    pub fn eval(&self, t: f64) -> Energy {
        if t > 0.0 {
            Energy::from_f64(self.weight * (t.powf(self.a) + t.powf(-self.b)))
        } else {
            Energy::Infinite
        }
    }

    /// Derivative at `t > 0`.
    pub fn deriv(&self, t: f64) -> f64 {
        self.weight * (self.a * t.powf(self.a - 1.0) - self.b * t.powf(-self.b - 1.0))
    }

    pub fn is_convex(&self) -> bool {
        self.a >= 1.0 && self.b > 0.0
    }
}

/// Growth exponents and constants declared by a model, with derived
/// conjugate exponents.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConditions {
    /// Deformation-gradient exponent, `p > n − 1`.
    pub p: f64,
    /// Cofactor exponent, `q > 1`.
    pub q: f64,
    /// Nematic exponent, `s > 1`.
    pub s: f64,
    /// Coercivity constant, `c > 0`.
    pub c: f64,
    /// Determinant penalty profile, when the model has one.
    pub theta: Option<Theta>,
    /// Modulus of continuity in the director argument.
    pub modulus: Modulus,
}

impl ModelConditions {
    pub fn validate(&self, dim: usize) -> Result<()> {
        let n = dim as f64;
        if !(self.p > n - 1.0) {
            return Err(CoreError::InvalidParameter(format!(
                "growth exponent p = {} must exceed n - 1 = {}",
                self.p,
                n - 1.0
            )));
        }
        if !(self.q > 1.0) {
            return Err(CoreError::InvalidParameter(format!(
                "cofactor exponent q = {} must exceed 1",
                self.q
            )));
        }
        if !(self.s > 1.0) {
            return Err(CoreError::InvalidParameter(format!(
                "nematic exponent s = {} must exceed 1",
                self.s
            )));
        }
        if !(self.c > 0.0) {
            return Err(CoreError::InvalidParameter(format!(
                "coercivity constant c = {} must be positive",
                self.c
            )));
        }
        Ok(())
    }

    /// Conjugate exponent of `p`.
    pub fn p_prime(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// Conjugate exponent of `q`.
    pub fn q_prime(&self) -> f64 {
        self.q / (self.q - 1.0)
    }
}

/// Modulus of continuity `h` in the director argument:
/// `|W(F,n) − W(F,m)| ≤ h(|n−m|) W(F,n)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Modulus {
    /// The density does not depend on the director.
    Zero,
    /// `h(t) = c·t`.
    Linear(f64),
    /// No analytic modulus is known; `check_conditions` fits an empirical
    /// table and reports it.
    Empirical,
}

impl Modulus {
    pub fn eval(&self, t: f64) -> Option<f64> {
        match self {
            Modulus::Zero => Some(0.0),
            Modulus::Linear(c) => Some(c * t),
            Modulus::Empirical => None,
        }
    }
}

/// A mechanical energy density `W : R^{n×n} × S^{n−1} → [0, ∞]`.
///
/// Evaluators must be pure; densities are immutable and callable
/// concurrently.
pub trait MechanicalDensity: Send + Sync {
    fn dim(&self) -> usize;

    /// Evaluate `W(F, n)`; infinite outside the admissible determinant set.
    fn eval(&self, f: &Mat, n: &Director) -> Energy;

    /// Analytic gradient `∂W/∂F` at points of finite energy.
    fn grad_f(&self, f: &Mat, n: &Director) -> Option<Mat>;

    /// Analytic gradient `∂W/∂n` where available.
    fn grad_n(&self, _f: &Mat, _n: &Director) -> Option<crate::tensor::Vector> {
        None
    }

    fn conditions(&self) -> &ModelConditions;

    /// Incompressible models are finite only near `det F = 1`.
    fn incompressible(&self) -> bool {
        false
    }

    /// Validation fixtures defined on all of `R^{n×n}` (no determinant
    /// constraint).
    fn unconstrained(&self) -> bool {
        false
    }

    fn depends_on_director(&self) -> bool {
        true
    }
}

/// A nematic energy density `V : T^n S^{n−1} → [0, ∞)`.
pub trait NematicDensity: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, z: &Director, zeta: &Mat) -> f64;

    /// Analytic gradient `∂V/∂ζ`.
    fn grad_zeta(&self, z: &Director, zeta: &Mat) -> Mat;

    fn conditions(&self) -> &ModelConditions;

    /// Whether `ζ` is required to satisfy `zᵀζ = 0`.
    fn tangential_only(&self) -> bool {
        false
    }
}

/// Determinant tolerance for incompressible models: `|det F − 1| ≤ DET_TOL`.
pub const INCOMPRESSIBLE_DET_TOL: f64 = 1e-8;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_saturates() {
        let inf = Energy::Infinite;
        let one = Energy::Finite(1.0);
        assert_eq!(inf.add(one), Energy::Infinite);
        assert_eq!(inf.scale(0.0), Energy::Infinite);
        assert_eq!(inf.min(one), one);
        assert_eq!(Energy::combine(0.5, inf, one), Energy::Infinite);
        assert_eq!(Energy::combine(0.25, one, Energy::Finite(5.0)), Energy::Finite(4.0));
        assert!(Energy::from_f64(f64::INFINITY) == Energy::Infinite);
    }

    #[test]
    fn theta_limits_and_convexity() {
        let theta = Theta::new(2.0, 2.0);
        assert!(theta.is_convex());
        assert_eq!(theta.eval(1.0), Energy::Finite(2.0));
        assert_eq!(theta.eval(0.0), Energy::Infinite);
        assert_eq!(theta.eval(-1.0), Energy::Infinite);
        // t -> 0 blowup and superlinear growth
        assert!(theta.eval(1e-6).to_f64() > 1e10);
        assert!(theta.eval(1e6).to_f64() / 1e6 > 1e5);
    }

    #[test]
    fn theta_submultiplicative_on_grid() {
        // th(t1 t2) <= 9 (1 + th(t1)) (1 + th(t2)) on a log grid, the
        // exhaustive check from the model contract.
        let theta = Theta::new(2.0, 2.0);
        let grid: Vec<f64> = (0..=40).map(|i| 0.01 * (100.0f64 / 0.01).powf(i as f64 / 40.0)).collect();
        for &t1 in &grid {
            for &t2 in &grid {
                let lhs = theta.eval(t1 * t2).to_f64();
                let rhs = 9.0 * (1.0 + theta.eval(t1).to_f64()) * (1.0 + theta.eval(t2).to_f64());
                assert!(lhs <= rhs, "submultiplicativity fails at ({t1}, {t2})");
            }
        }
    }
}
