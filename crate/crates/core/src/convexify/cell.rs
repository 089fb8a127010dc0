//! Direct cell-problem discretization of the quasiconvexification: minimize
//! the mean of `W(F + Dφ, m)` over piecewise-affine `φ` vanishing on the
//! boundary of a triangulated unit ball.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::energy::MechanicalDensity;
use crate::mesh::TriMesh;
use crate::tensor::{Director, Mat, Vector};

#[derive(Debug, Clone, Copy)]
pub struct CellProblemParams {
    /// Rings of the disk triangulation.
    pub mesh_resolution: usize,
    /// Random restarts in addition to the zero and laminate-seeded starts.
    pub restarts: usize,
    pub seed: u64,
    pub max_descent_iters: usize,
    pub grad_tol: f64,
}

impl Default for CellProblemParams {
    fn default() -> Self {
        CellProblemParams {
            mesh_resolution: 8,
            restarts: 3,
            seed: 0,
            max_descent_iters: 300,
            grad_tol: 1e-7,
        }
    }
}

/// Outcome of a cell-problem solve.
#[derive(Debug, Clone, Copy)]
pub struct CellProblemValue {
    pub value: f64,
    /// Set when every start hit infinite energy and the density value at
    /// `F` itself was returned.
    pub all_starts_infinite: bool,
}

struct CellAssembly {
    mesh: TriMesh,
    /// Interior node indices (displacement dofs).
    free: Vec<usize>,
    total_area: f64,
}

impl CellAssembly {
    fn new(rings: usize) -> CellAssembly {
        let mesh = TriMesh::disk(rings);
        let boundary = mesh.boundary_nodes();
        let mut is_boundary = vec![false; mesh.vertex_count()];
        for &b in &boundary {
            is_boundary[b] = true;
        }
        let free = (0..mesh.vertex_count())
            .filter(|&i| !is_boundary[i])
            .collect();
        let total_area = mesh.total_area();
        CellAssembly {
            mesh,
            free,
            total_area,
        }
    }

    /// Mean of `W(F + Dφ, m)` for nodal displacements `φ` (zero on the
    /// boundary enforced by never moving boundary nodes).
    fn objective(
        &self,
        w: &dyn MechanicalDensity,
        m: &Director,
        f: &Mat,
        phi: &[Vector],
    ) -> f64 {
        let mut acc = 0.0;
        for cell in 0..self.mesh.cell_count() {
            let grad = self.mesh.value_gradient(cell, phi);
            let total = f.add(&grad);
            let val = w.eval(&total, m).to_f64();
            if val == f64::INFINITY {
                return f64::INFINITY;
            }
            acc += val * self.mesh.cell_area(cell);
        }
        acc / self.total_area
    }

    /// Gradient of the mean energy with respect to the free nodal values.
    fn gradient(
        &self,
        w: &dyn MechanicalDensity,
        m: &Director,
        f: &Mat,
        phi: &[Vector],
    ) -> Option<Vec<Vector>> {
        let mut g = vec![Vector::zero(2); self.mesh.vertex_count()];
        for cell in 0..self.mesh.cell_count() {
            let grad = self.mesh.value_gradient(cell, phi);
            let total = f.add(&grad);
            let dw = w.grad_f(&total, m)?;
            let area = self.mesh.cell_area(cell);
            // dDphi/dphi_node: rows of the inverse reference map
            let (nodes, shape_grads) = self.mesh.shape_gradients(cell);
            for (local, &node) in nodes.iter().enumerate() {
                let sg = shape_grads[local];
                // d/dphi_node of area * W: area * dW : (e_k ⊗ sg)
                let gx = area * (dw.e(0, 0) * sg.component(0) + dw.e(0, 1) * sg.component(1));
                let gy = area * (dw.e(1, 0) * sg.component(0) + dw.e(1, 1) * sg.component(1));
                g[node] = g[node].add(&Vector::D2([gx, gy]));
            }
        }
        for v in g.iter_mut() {
            *v = v.scale(1.0 / self.total_area);
        }
        Some(g)
    }

    fn descend(
        &self,
        w: &dyn MechanicalDensity,
        m: &Director,
        f: &Mat,
        mut phi: Vec<Vector>,
        params: &CellProblemParams,
    ) -> Option<f64> {
        let mut value = self.objective(w, m, f, &phi);
        if value == f64::INFINITY {
            return None;
        }
        let mut step = 0.1;
        for _ in 0..params.max_descent_iters {
            let grad = self.gradient(w, m, f, &phi)?;
            let gnorm2: f64 = self.free.iter().map(|&i| grad[i].dot(&grad[i])).sum();
            if gnorm2.sqrt() < params.grad_tol {
                break;
            }
            // backtracking line search with the determinant barrier folded
            // into the infinite objective
            let mut accepted = false;
            for _ in 0..40 {
                let mut trial = phi.clone();
                for &i in &self.free {
                    trial[i] = phi[i].sub(&grad[i].scale(step));
                }
                let tv = self.objective(w, m, f, &trial);
                if tv < value - 1e-4 * step * gnorm2 {
                    phi = trial;
                    value = tv;
                    accepted = true;
                    step = (step * 1.8).min(10.0);
                    break;
                }
                step *= 0.5;
                if step < 1e-14 {
                    break;
                }
            }
            if !accepted {
                break;
            }
        }
        Some(value)
    }
}

/// Best cell-problem value over zero, laminate-seeded and random starts.
///
/// The value upper-bounds `W^qc(F, m)` up to mesh error: it is a genuine
/// admissible test field. When every start lands at infinite energy the
/// density value at `F` is returned with a flag.
pub fn cell_problem_qc(
    w: &dyn MechanicalDensity,
    m: &Director,
    f: &Mat,
    params: &CellProblemParams,
    laminate_seed: Option<(&Mat, f64)>,
) -> CellProblemValue {
    let assembly = CellAssembly::new(params.mesh_resolution);
    let nv = assembly.mesh.vertex_count();

    let mut starts: Vec<Vec<Vector>> = Vec::new();
    starts.push(vec![Vector::zero(2); nv]);

    if let Some((direction, amplitude)) = laminate_seed {
        // sawtooth along the rank-one direction, cut off at the boundary
        let a = Vector::D2([direction.e(0, 0), direction.e(1, 0)]);
        let b = Vector::D2([direction.e(0, 0), direction.e(0, 1)]);
        let b = if b.norm() < 1e-12 { Vector::D2([0.0, 1.0]) } else { b };
        let mut seeded = vec![Vector::zero(2); nv];
        for i in 0..nv {
            let x = assembly.mesh.vertex(i);
            let xv = Vector::D2(x);
            let r = xv.norm();
            let cutoff = (1.0 - r).clamp(0.0, 0.25) / 0.25;
            let s = xv.dot(&b) * 6.0;
            let saw = (s - s.floor() - 0.5).abs() * 2.0 - 0.5;
            seeded[i] = a.scale(amplitude * saw * cutoff / 6.0);
        }
        starts.push(seeded);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.restarts {
        let mut random = vec![Vector::zero(2); nv];
        let scale = 0.05;
        for (i, r) in random.iter_mut().enumerate() {
            let x = assembly.mesh.vertex(i);
            let cutoff = (1.0 - Vector::D2(x).norm()).clamp(0.0, 1.0);
            *r = Vector::D2([
                rng.gen_range(-scale..scale) * cutoff,
                rng.gen_range(-scale..scale) * cutoff,
            ]);
        }
        starts.push(random);
    }

    let results: Vec<Option<f64>> = starts
        .into_par_iter()
        .map(|phi| assembly.descend(w, m, f, phi, params))
        .collect();

    let best = results.into_iter().flatten().fold(f64::INFINITY, f64::min);
    if best.is_finite() {
        CellProblemValue {
            value: best,
            all_starts_infinite: false,
        }
    } else {
        CellProblemValue {
            value: w.eval(f, m).to_f64(),
            all_starts_infinite: true,
        }
    }
}
