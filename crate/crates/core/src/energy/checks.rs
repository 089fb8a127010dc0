//! Monte-Carlo verification of the growth, symmetry and continuity clauses
//! declared by an energy model.
//!
//! The sampler is the oracle here: each clause is tested on randomized
//! admissible inputs and reported with its worst violating sample. The
//! modulus of continuity in the director argument is fitted empirically
//! when the model does not declare an analytic one.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::energy::nematic::{random_director, random_tangential};
use crate::energy::{MechanicalDensity, Modulus, NematicDensity};
use crate::tensor::Mat;

/// Outcome of a single verified clause.
#[derive(Debug, Clone)]
pub struct ClauseResult {
    pub name: String,
    pub passed: bool,
    /// Worst signed violation found (positive means the clause failed by
    /// that margin).
    pub worst: f64,
    pub witness: Option<String>,
}

impl ClauseResult {
    fn pass(name: &str, worst: f64) -> ClauseResult {
        ClauseResult {
            name: name.into(),
            passed: true,
            worst,
            witness: None,
        }
    }

    fn fail(name: &str, worst: f64, witness: String) -> ClauseResult {
        ClauseResult {
            name: name.into(),
            passed: false,
            worst,
            witness: Some(witness),
        }
    }
}

/// Report of all clause checks for one density, plus the empirically fitted
/// director modulus when applicable.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub clauses: Vec<ClauseResult>,
    /// Fitted modulus table `(t, h(t))`: worst observed relative variation
    /// of the density over director perturbations of size `t`.
    pub fitted_modulus: Option<Vec<(f64, f64)>>,
}

impl ConditionReport {
    pub fn all_passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn clause(&self, name: &str) -> Option<&ClauseResult> {
        self.clauses.iter().find(|c| c.name == name)
    }
}

fn random_positive_det_matrix<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> Mat {
    loop {
        let mut m = Mat::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, rng.gen_range(-scale..scale));
            }
        }
        if m.det() > 1e-3 {
            return m;
        }
    }
}

/// Verify the clauses of condition (W) (or (W₁) for incompressible models)
/// for a mechanical density by sampling.
pub fn check_conditions(
    w: &dyn MechanicalDensity,
    sample_count: usize,
    seed: u64,
) -> ConditionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = w.dim();
    let cond = w.conditions();
    let mut clauses = Vec::new();

    let sample_f = |rng: &mut ChaCha8Rng| -> Mat {
        let f = random_positive_det_matrix(rng, dim, 2.5);
        if w.incompressible() {
            f.scale(f.det().powf(-1.0 / dim as f64))
        } else {
            f
        }
    };

    // nonnegativity
    let mut worst = 0.0f64;
    let mut witness = None;
    for _ in 0..sample_count {
        let f = sample_f(&mut rng);
        let n = random_director(&mut rng, dim);
        if let Some(v) = w.eval(&f, &n).finite() {
            if -v > worst {
                worst = -v;
                witness = Some(format!("W = {v:.6e} at F = {:?}", f.entries()));
            }
        }
    }
    clauses.push(if worst > 1e-12 {
        ClauseResult::fail("nonnegativity", worst, witness.unwrap())
    } else {
        ClauseResult::pass("nonnegativity", worst)
    });

    // head-to-tail symmetry, exact
    let mut worst = 0.0f64;
    let mut witness = None;
    for _ in 0..sample_count {
        let f = sample_f(&mut rng);
        let n = random_director(&mut rng, dim);
        let d = (w.eval(&f, &n).to_f64() - w.eval(&f, &n.flipped()).to_f64()).abs();
        if d.is_nan() {
            continue;
        }
        if d > worst {
            worst = d;
            witness = Some(format!("asymmetry {d:.3e} at n = {:?}", n.vector().components()));
        }
    }
    clauses.push(if worst > 0.0 {
        ClauseResult::fail("head-to-tail symmetry", worst, witness.unwrap())
    } else {
        ClauseResult::pass("head-to-tail symmetry", worst)
    });

    // finiteness domain: finite iff det > 0 (or near 1 when incompressible)
    if !w.unconstrained() {
        let mut worst = 0.0f64;
        let mut witness = None;
        for _ in 0..sample_count {
            let mut f = random_positive_det_matrix(&mut rng, dim, 2.5);
            let n = random_director(&mut rng, dim);
            if rng.gen_bool(0.5) {
                // flip a row to force det < 0
                for j in 0..dim {
                    f.set(0, j, -f.e(0, j));
                }
            }
            let admissible = if w.incompressible() {
                (f.det() - 1.0).abs() <= crate::energy::INCOMPRESSIBLE_DET_TOL
            } else {
                f.det() > 0.0
            };
            let finite = w.eval(&f, &n).is_finite();
            if finite != admissible {
                worst = 1.0;
                witness = Some(format!(
                    "finite = {finite} but det = {:.3e} (admissible = {admissible})",
                    f.det()
                ));
                break;
            }
        }
        clauses.push(if worst > 0.0 {
            ClauseResult::fail("finiteness domain", worst, witness.unwrap())
        } else {
            ClauseResult::pass("finiteness domain", 0.0)
        });
    }

    // growth bounds with the declared constant
    let mut worst = 0.0f64;
    let mut witness = None;
    for _ in 0..sample_count {
        let f = sample_f(&mut rng);
        let n = random_director(&mut rng, dim);
        let value = match w.eval(&f, &n).finite() {
            Some(v) => v,
            None => continue,
        };
        let fp = f.norm().powf(cond.p);
        let theta_term = cond
            .theta
            .map(|t| t.eval(f.det()).to_f64())
            .unwrap_or(0.0);
        let upper = cond.c * (fp + theta_term + 1.0);
        let lower = if w.incompressible() {
            fp / cond.c - cond.c
        } else {
            (fp + f.cof().norm().powf(cond.q) + theta_term) / cond.c - cond.c
        };
        let violation = (value - upper).max(lower - value);
        if violation > worst {
            worst = violation;
            witness = Some(format!(
                "W = {value:.4e} outside [{lower:.4e}, {upper:.4e}] at |F| = {:.3}",
                f.norm()
            ));
        }
    }
    clauses.push(if worst > 1e-9 {
        ClauseResult::fail("growth bounds", worst, witness.unwrap())
    } else {
        ClauseResult::pass("growth bounds", worst)
    });

    // theta limits: blow-up at 0+ (weighted by t^{q'-1}) and superlinearity
    if let Some(theta) = cond.theta {
        let qp = cond.q_prime();
        let near_zero = [1e-6f64, 1e-5, 1e-4]
            .iter()
            .map(|&t| t.powf(qp - 1.0) * theta.eval(t).to_f64())
            .fold(f64::INFINITY, f64::min);
        let superlinear = theta.eval(1e8).to_f64() / 1e8;
        let ok = near_zero > 1e-6 && superlinear > 1e2;
        clauses.push(if ok {
            ClauseResult::pass("theta limits", 0.0)
        } else {
            ClauseResult::fail(
                "theta limits",
                1.0,
                format!("liminf t^(q'-1) theta = {near_zero:.3e}, theta(t)/t at 1e8 = {superlinear:.3e}"),
            )
        });

        // submultiplicativity on the 0.01..100 grid; the constant is 9 for
        // unit weight and grows like 1/weight for down-weighted penalties
        let grid: Vec<f64> = (0..=24)
            .map(|i| 0.01 * (100.0f64 / 0.01).powf(i as f64 / 24.0))
            .collect();
        let submult_const = 9.0 * (1.0f64 / theta.weight).max(1.0);
        let mut worst = 0.0f64;
        let mut witness = None;
        for &t1 in &grid {
            for &t2 in &grid {
                let lhs = theta.eval(t1 * t2).to_f64();
                let rhs = submult_const
                    * (1.0 + theta.eval(t1).to_f64())
                    * (1.0 + theta.eval(t2).to_f64());
                if lhs - rhs > worst {
                    worst = lhs - rhs;
                    witness = Some(format!("t1 = {t1:.3}, t2 = {t2:.3}"));
                }
            }
        }
        clauses.push(if worst > 0.0 {
            ClauseResult::fail("theta submultiplicative", worst, witness.unwrap())
        } else {
            ClauseResult::pass("theta submultiplicative", worst)
        });
    }

    // modulus of continuity in the director
    let mut fitted = None;
    if w.depends_on_director() {
        let bins = 12usize;
        let mut table: Vec<(f64, f64)> = (0..bins)
            .map(|i| (2.0 * (i + 1) as f64 / bins as f64, 0.0))
            .collect();
        let mut worst = 0.0f64;
        let mut witness = None;
        for _ in 0..sample_count {
            let f = sample_f(&mut rng);
            let n = random_director(&mut rng, dim);
            let m = random_director(&mut rng, dim);
            let (wn, wm) = (w.eval(&f, &n).to_f64(), w.eval(&f, &m).to_f64());
            if !wn.is_finite() || !wm.is_finite() || wn <= 1e-12 {
                continue;
            }
            let t = n.vector().sub(m.vector()).norm();
            let ratio = (wn - wm).abs() / wn;
            let bin = ((t / 2.0 * bins as f64).ceil() as usize).clamp(1, bins) - 1;
            if ratio > table[bin].1 {
                table[bin].1 = ratio;
            }
            match cond.modulus.eval(t) {
                Some(h) => {
                    if ratio - h > worst {
                        worst = ratio - h;
                        witness = Some(format!("ratio {ratio:.3e} > h({t:.3}) = {h:.3e}"));
                    }
                }
                None => {}
            }
        }
        // enforce monotonicity of the fitted table
        for i in 1..bins {
            if table[i].1 < table[i - 1].1 {
                table[i].1 = table[i - 1].1;
            }
        }
        match cond.modulus {
            Modulus::Empirical => {
                // report-only: the clause passes iff the fitted modulus decays
                let small = table[0].1;
                clauses.push(if small < 0.9 {
                    ClauseResult::pass("modulus fit (empirical)", small)
                } else {
                    ClauseResult::fail(
                        "modulus fit (empirical)",
                        small,
                        format!("fitted h({:.3}) = {small:.3}", table[0].0),
                    )
                });
            }
            _ => {
                clauses.push(if worst > 1e-9 {
                    ClauseResult::fail("modulus bound", worst, witness.unwrap())
                } else {
                    ClauseResult::pass("modulus bound", worst)
                });
            }
        }
        fitted = Some(table);
    }

    ConditionReport {
        clauses,
        fitted_modulus: fitted,
    }
}

/// Verify the clauses of condition (V) for a nematic density by sampling
/// tangential arguments.
pub fn check_nematic_conditions(
    v: &dyn NematicDensity,
    sample_count: usize,
    seed: u64,
) -> ConditionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = v.dim();
    let cond = v.conditions();
    let mut clauses = Vec::new();

    // nonnegativity
    let mut worst = 0.0f64;
    let mut witness = None;
    for _ in 0..sample_count {
        let z = random_director(&mut rng, dim);
        let zeta = random_tangential(&mut rng, &z, 3.0);
        let val = v.eval(&z, &zeta);
        if -val > worst {
            worst = -val;
            witness = Some(format!("V = {val:.6e}"));
        }
    }
    clauses.push(if worst > 1e-12 {
        ClauseResult::fail("nonnegativity", worst, witness.unwrap())
    } else {
        ClauseResult::pass("nonnegativity", worst)
    });

    // head-to-tail symmetry V(z, zeta) = V(-z, -zeta)
    let mut worst = 0.0f64;
    let mut witness = None;
    for _ in 0..sample_count {
        let z = random_director(&mut rng, dim);
        let zeta = random_tangential(&mut rng, &z, 3.0);
        let d = (v.eval(&z, &zeta) - v.eval(&z.flipped(), &zeta.scale(-1.0))).abs();
        if d > worst {
            worst = d;
            witness = Some(format!("asymmetry {d:.3e}"));
        }
    }
    clauses.push(if worst > 1e-10 {
        ClauseResult::fail("head-to-tail symmetry", worst, witness.unwrap())
    } else {
        ClauseResult::pass("head-to-tail symmetry", worst)
    });

    // growth bounds (V)
    let mut worst = 0.0f64;
    let mut witness = None;
    for _ in 0..sample_count {
        let z = random_director(&mut rng, dim);
        let zeta = random_tangential(&mut rng, &z, 4.0);
        let val = v.eval(&z, &zeta);
        let zs = zeta.norm().powf(cond.s);
        let upper = cond.c * zs + cond.c;
        let lower = zs / cond.c - cond.c;
        let violation = (val - upper).max(lower - val);
        if violation > worst {
            worst = violation;
            witness = Some(format!("V = {val:.4e} outside [{lower:.4e}, {upper:.4e}]"));
        }
    }
    clauses.push(if worst > 1e-9 {
        ClauseResult::fail("growth bounds", worst, witness.unwrap())
    } else {
        ClauseResult::pass("growth bounds", worst)
    });

    ConditionReport {
        clauses,
        fitted_modulus: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{
        make_double_well, make_nematic_mechanical, make_one_constant, make_w0_compressible,
        Energy, ModelConditions, Theta,
    };
    use crate::tensor::Director;
    use std::sync::Arc;

    #[test]
    fn one_constant_passes_all_v_clauses() {
        let v = make_one_constant(2, 1.0).unwrap();
        let report = check_nematic_conditions(&v, 500, 1);
        assert!(report.all_passed(), "{:?}", report.clauses);
    }

    #[test]
    fn compressible_w0_passes_w_clauses() {
        let w = make_w0_compressible(2, 2.0, 2.0, 2.0).unwrap();
        let report = check_conditions(&w, 10_000, 2);
        assert!(report.all_passed(), "{:?}", report.clauses);
    }

    #[test]
    fn composed_model_reports_empirical_modulus() {
        let base = Arc::new(make_w0_compressible(2, 2.0, 2.0, 2.0).unwrap());
        let w = make_nematic_mechanical(base, 1.5).unwrap();
        let report = check_conditions(&w, 2000, 3);
        let table = report.fitted_modulus.as_ref().expect("modulus fitted");
        // the fitted modulus must decay towards small separations
        assert!(table[0].1 <= table.last().unwrap().1 + 1e-12);
        assert!(report.all_passed(), "{:?}", report.clauses);
    }

    #[test]
    fn double_well_passes_with_linear_modulus() {
        let a = Mat::diag(&[0.8, 1.0]);
        let b = Mat::diag(&[1.2, 1.0]);
        let w = make_double_well(
            a,
            b,
            0.5,
            Director::axis(2, 0),
            Theta::with_weight(2.0, 2.0, 0.1),
            0.0,
        )
        .unwrap();
        let report = check_conditions(&w, 5000, 4);
        assert!(report.all_passed(), "{:?}", report.clauses);
    }

    struct PlantedDefect(ModelConditions);

    impl MechanicalDensity for PlantedDefect {
        fn dim(&self) -> usize {
            2
        }
        fn eval(&self, _f: &Mat, _n: &Director) -> Energy {
            Energy::Finite(-1.0)
        }
        fn grad_f(&self, _f: &Mat, _n: &Director) -> Option<Mat> {
            Some(Mat::zero(2))
        }
        fn conditions(&self) -> &ModelConditions {
            &self.0
        }
        fn unconstrained(&self) -> bool {
            true
        }
        fn depends_on_director(&self) -> bool {
            false
        }
    }

    #[test]
    fn planted_defect_fails_nonnegativity() {
        let w = PlantedDefect(make_w0_compressible(2, 2.0, 2.0, 2.0).unwrap().conditions().clone());
        let report = check_conditions(&w, 200, 5);
        let clause = report.clause("nonnegativity").unwrap();
        assert!(!clause.passed);
    }

    #[test]
    fn analytic_gradients_match_finite_differences() {
        // the module-level invariant: analytic F-gradients vs central
        // differences at random finite points
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let base = Arc::new(make_w0_compressible(2, 3.0, 2.0, 2.0).unwrap());
        let composed = make_nematic_mechanical(base.clone(), 2.0).unwrap();
        let densities: Vec<&dyn MechanicalDensity> = vec![base.as_ref(), &composed];
        for w in densities {
            for _ in 0..100 {
                let f = super::random_positive_det_matrix(&mut rng, 2, 1.5);
                if f.det() < 0.3 {
                    continue;
                }
                let n = random_director(&mut rng, 2);
                let g = w.grad_f(&f, &n).expect("finite point");
                let h = 1e-6;
                for i in 0..2 {
                    for j in 0..2 {
                        let mut fp = f;
                        fp.set(i, j, f.e(i, j) + h);
                        let mut fm = f;
                        fm.set(i, j, f.e(i, j) - h);
                        let fd =
                            (w.eval(&fp, &n).to_f64() - w.eval(&fm, &n).to_f64()) / (2.0 * h);
                        let scale = 1.0 + g.norm();
                        assert!(
                            (fd - g.e(i, j)).abs() / scale < 1e-5,
                            "gradient mismatch: fd = {fd}, analytic = {}",
                            g.e(i, j)
                        );
                    }
                }
            }
        }
    }
}
