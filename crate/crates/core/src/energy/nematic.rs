use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::energy::{ModelConditions, Modulus, NematicDensity};
use crate::error::CoreError;
use crate::tensor::{projection, Director, Mat, Vector};
use crate::Result;

/// One-constant approximation `V(z, ζ) = K |ζ|²`.
pub struct OneConstant {
    dim: usize,
    k: f64,
    conditions: ModelConditions,
}

pub fn make_one_constant(dim: usize, k: f64) -> Result<OneConstant> {
    if !(k > 0.0) {
        return Err(CoreError::InvalidParameter(format!(
            "one-constant coefficient must be positive, got {k}"
        )));
    }
    Ok(OneConstant {
        dim,
        k,
        conditions: ModelConditions {
            p: dim as f64,
            q: 2.0,
            s: 2.0,
            c: k.max(1.0 / k),
            theta: None,
            modulus: Modulus::Zero,
        },
    })
}

impl NematicDensity for OneConstant {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, _z: &Director, zeta: &Mat) -> f64 {
        self.k * zeta.dot(zeta)
    }

    fn grad_zeta(&self, _z: &Director, zeta: &Mat) -> Mat {
        zeta.scale(2.0 * self.k)
    }

    fn conditions(&self) -> &ModelConditions {
        &self.conditions
    }
}

/// Oseen–Frank density in dimension 3,
/// `K₁(div n)² + K₂(n·curl n)² + K₃|n×curl n|² + (K₂+K₄)(tr(Dn)² − (div n)²)`,
/// with divergence and curl read from the gradient argument `ζ`.
pub struct OseenFrank {
    k1: f64,
    k2: f64,
    k3: f64,
    k4: f64,
    conditions: ModelConditions,
}

/// Build an Oseen–Frank density, rejecting constants for which sampling
/// finds a negative value on tangential arguments.
pub fn make_oseen_frank(k1: f64, k2: f64, k3: f64, k4: f64) -> Result<OseenFrank> {
    let kmax = k1.abs().max(k2.abs()).max(k3.abs()).max((k2 + k4).abs()).max(1e-3);
    let of = OseenFrank {
        k1,
        k2,
        k3,
        k4,
        conditions: ModelConditions {
            p: 3.0,
            q: 2.0,
            s: 2.0,
            c: 8.0 * kmax.max(1.0 / kmax),
            theta: None,
            modulus: Modulus::Empirical,
        },
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x0f5ee);
    for _ in 0..2000 {
        let z = random_director(&mut rng, 3);
        let zeta = random_tangential(&mut rng, &z, 3.0);
        let v = of.eval(&z, &zeta);
        if v < -1e-10 {
            return Err(CoreError::InvalidParameter(format!(
                "Oseen-Frank constants ({k1}, {k2}, {k3}, {k4}) give a negative density {v:.3e}"
            )));
        }
    }
    Ok(of)
}

fn curl_from_gradient(zeta: &Mat) -> Vector {
    // zeta_{ij} = d n_i / d x_j
    Vector::D3([
        zeta.e(2, 1) - zeta.e(1, 2),
        zeta.e(0, 2) - zeta.e(2, 0),
        zeta.e(1, 0) - zeta.e(0, 1),
    ])
}

/// Skew matrix S(v) with S(v)_{ij} = sum_k v_k eps_{kji}.
fn skew(v: &Vector) -> Mat {
    let (v1, v2, v3) = (v.component(0), v.component(1), v.component(2));
    Mat::D3([[0.0, -v3, v2], [v3, 0.0, -v1], [-v2, v1, 0.0]])
}

impl OseenFrank {
    pub fn constants(&self) -> (f64, f64, f64, f64) {
        (self.k1, self.k2, self.k3, self.k4)
    }
}

impl NematicDensity for OseenFrank {
    fn dim(&self) -> usize {
        3
    }

    fn eval(&self, z: &Director, zeta: &Mat) -> f64 {
        let div = zeta.trace();
        let curl = curl_from_gradient(zeta);
        let twist = z.vector().dot(&curl);
        let bend2 = curl.dot(&curl) - twist * twist;
        let tr_sq = zeta.mul(zeta).trace();
        self.k1 * div * div
            + self.k2 * twist * twist
            + self.k3 * bend2
            + (self.k2 + self.k4) * (tr_sq - div * div)
    }

    fn grad_zeta(&self, z: &Director, zeta: &Mat) -> Mat {
        let div = zeta.trace();
        let curl = curl_from_gradient(zeta);
        let twist = z.vector().dot(&curl);
        let id = Mat::identity(3);

        let d_div2 = id.scale(2.0 * div);
        let d_twist2 = skew(z.vector()).scale(2.0 * twist);
        let d_curl2 = skew(&curl).scale(2.0);
        let d_bend2 = d_curl2.sub(&d_twist2);
        let d_trsq = zeta.transpose().scale(2.0);

        d_div2
            .scale(self.k1)
            .add(&d_twist2.scale(self.k2))
            .add(&d_bend2.scale(self.k3))
            .add(&d_trsq.sub(&d_div2).scale(self.k2 + self.k4))
    }

    fn conditions(&self) -> &ModelConditions {
        &self.conditions
    }

    fn tangential_only(&self) -> bool {
        true
    }
}

/// Planar two-well nematic fixture with `z`-dependent tangential wells
/// `ζᵢ(z) = z^⊥ ⊗ cᵢ`:
/// `V(z, ζ) = K·min(|ζ−ζ₁(z)|², |ζ−ζ₂(z)|²) + ε|ζ|ˢ`.
///
/// The wells are odd in `z`, so `V(−z, −ζ) = V(z, ζ)` holds exactly.
pub struct TangentDoubleWell {
    c1: Vector,
    c2: Vector,
    k: f64,
    eps: f64,
    s: f64,
    conditions: ModelConditions,
}

pub fn make_tangent_double_well(
    c1: Vector,
    c2: Vector,
    k: f64,
    eps: f64,
) -> Result<TangentDoubleWell> {
    if c1.dim() != 2 || c2.dim() != 2 {
        return Err(CoreError::Unsupported(
            "tangent double-well wells require dimension 2 (no global tangent frame on the 2-sphere)"
                .into(),
        ));
    }
    if c1.sub(&c2).norm() < 1e-12 {
        return Err(CoreError::InvalidParameter(
            "tangent double-well needs two distinct wells".into(),
        ));
    }
    if !(k > 0.0) || !(eps > 0.0) {
        return Err(CoreError::InvalidParameter(
            "tangent double-well needs K > 0 and eps > 0".into(),
        ));
    }
    let s = 2.0;
    let wmax2 = c1.dot(&c1).max(c2.dot(&c2));
    Ok(TangentDoubleWell {
        c1,
        c2,
        k,
        eps,
        s,
        conditions: ModelConditions {
            p: 2.0,
            q: 2.0,
            s,
            c: (2.0 * k * (1.0 + wmax2) + eps + 1.0).max(1.0 / eps),
            theta: None,
            modulus: Modulus::Empirical,
        },
    })
}

impl TangentDoubleWell {
    /// The tangential wells at `z`.
    pub fn wells_at(&self, z: &Director) -> (Mat, Mat) {
        let t = z.vector().perp();
        (Mat::outer(&t, &self.c1), Mat::outer(&t, &self.c2))
    }

    pub fn floor_coefficient(&self) -> f64 {
        self.eps
    }
}

impl NematicDensity for TangentDoubleWell {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, z: &Director, zeta: &Mat) -> f64 {
        let (w1, w2) = self.wells_at(z);
        let d1 = zeta.sub(&w1).dot(&zeta.sub(&w1));
        let d2 = zeta.sub(&w2).dot(&zeta.sub(&w2));
        self.k * d1.min(d2) + self.eps * zeta.norm().powf(self.s)
    }

    fn grad_zeta(&self, z: &Director, zeta: &Mat) -> Mat {
        let (w1, w2) = self.wells_at(z);
        let d1 = zeta.sub(&w1).dot(&zeta.sub(&w1));
        let d2 = zeta.sub(&w2).dot(&zeta.sub(&w2));
        let nearest = if d1 <= d2 { w1 } else { w2 };
        let mut g = zeta.sub(&nearest).scale(2.0 * self.k);
        let norm = zeta.norm();
        if norm > 0.0 {
            g = g.add(&zeta.scale(self.eps * self.s * norm.powf(self.s - 2.0)));
        }
        g
    }

    fn conditions(&self) -> &ModelConditions {
        &self.conditions
    }

    fn tangential_only(&self) -> bool {
        true
    }
}

pub(crate) fn random_director<R: Rng>(rng: &mut R, dim: usize) -> Director {
    loop {
        let mut v = Vector::zero(dim);
        for i in 0..dim {
            v.set(i, rng.gen_range(-1.0..1.0));
        }
        if v.norm() > 0.2 {
            return Director::new(v).expect("norm checked above");
        }
    }
}

pub(crate) fn random_tangential<R: Rng>(rng: &mut R, z: &Director, scale: f64) -> Mat {
    let dim = z.dim();
    let mut m = Mat::zero(dim);
    for i in 0..dim {
        for j in 0..dim {
            m.set(i, j, rng.gen_range(-scale..scale));
        }
    }
    projection(z).mul(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn one_constant_values() {
        let v = make_one_constant(2, 3.0).unwrap();
        let z = Director::axis(2, 0);
        assert_eq!(v.eval(&z, &Mat::zero(2)), 0.0);
        let unit = Mat::D2([[0.0, 0.0], [1.0, 0.0]]); // z-perp column, norm 1
        assert_abs_diff_eq!(v.eval(&z, &unit), 3.0, epsilon = 1e-15);
    }

    #[test]
    fn oseen_frank_one_constant_reduction() {
        // K1 = K2 = K3 = K, K4 = 0 reduces to K |zeta|^2
        let k = 1.7;
        let of = make_oseen_frank(k, k, k, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let z = random_director(&mut rng, 3);
            let zeta = random_tangential(&mut rng, &z, 2.0);
            assert_abs_diff_eq!(of.eval(&z, &zeta), k * zeta.dot(&zeta), epsilon = 1e-10);
        }
    }

    #[test]
    fn oseen_frank_zero_gradient_and_symmetry() {
        let of = make_oseen_frank(1.0, 0.5, 2.0, 0.3).unwrap();
        let z = Director::axis(3, 2);
        assert_eq!(of.eval(&z, &Mat::zero(3)), 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let z = random_director(&mut rng, 3);
            let zeta = random_tangential(&mut rng, &z, 2.0);
            let flipped = of.eval(&z.flipped(), &zeta.scale(-1.0));
            assert_abs_diff_eq!(of.eval(&z, &zeta), flipped, epsilon = 1e-10);
        }
    }

    #[test]
    fn oseen_frank_rejects_negative_combination() {
        assert!(make_oseen_frank(-1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn tangent_double_well_at_wells_and_symmetry() {
        let c1 = Vector::D2([1.0, 0.0]);
        let c2 = Vector::D2([-1.0, 0.0]);
        let v = make_tangent_double_well(c1, c2, 1.0, 1e-4).unwrap();
        let z = Director::from_angle(0.3);
        let (w1, _) = v.wells_at(&z);
        assert_abs_diff_eq!(v.eval(&z, &w1), 1e-4 * w1.norm().powi(2), epsilon = 1e-12);

        // odd wells give exact head-to-tail symmetry
        let zeta = Mat::D2([[0.3, -0.2], [0.5, 0.1]]);
        let zeta = projection(&z).mul(&zeta);
        assert_abs_diff_eq!(
            v.eval(&z, &zeta),
            v.eval(&z.flipped(), &zeta.scale(-1.0)),
            epsilon = 1e-12
        );
    }

    #[test]
    fn tangent_double_well_needs_dim2() {
        let c1 = Vector::D3([1.0, 0.0, 0.0]);
        let c2 = Vector::D3([-1.0, 0.0, 0.0]);
        assert!(make_tangent_double_well(c1, c2, 1.0, 1e-4).is_err());
    }
}
