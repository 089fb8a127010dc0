//! Numerical toolkit for the relaxation of nematic elastomer energies.
//!
//! The library evaluates coupled mechanical/nematic functionals in which the
//! director field lives on the deformed configuration, brackets quasiconvex
//! envelopes between a lamination upper bound and a polyconvex lower bound,
//! detects cavitation through a surface-energy pairing, and constructs
//! explicit microstructure sequences whose energies approach the relaxed
//! functional.
//!
//! Module layout:
//!
//! - [`tensor`]: exact small-dimension (2 and 3) matrix/director algebra.
//! - [`energy`]: mechanical densities `W(F, n)` and nematic densities
//!   `V(z, ζ)` with machine-checkable growth/symmetry metadata.
//! - [`convexify`]: rank-one (lamination) upper envelopes, polyconvex lower
//!   bounds in minors coordinates, cell-problem cross-checks, tangential
//!   quasiconvexification and laminate extraction.
//! - [`mesh`]: simplicial meshes, point location, quadrature and the polygon
//!   machinery used by the deformation surgery.
//! - [`geometry`]: piecewise-affine deformations, surface energy,
//!   topological degree, topological/geometric images, local inverses,
//!   paste and inner composition.
//! - [`fields`]: evaluation of the coupled functionals and their relaxed
//!   counterparts on admissible pairs.
//! - [`recovery`]: laminate test maps, ball modification, covering passes,
//!   recovery sequences and an alternating minimizer.
//! - [`formats`]: plain-text file formats for meshes, envelope tables,
//!   rasters and reports.

pub mod convexify;
pub mod energy;
pub mod error;
pub mod fields;
pub mod formats;
pub mod geometry;
pub mod mesh;
pub mod recovery;
pub mod tensor;

pub use error::CoreError;
pub use tensor::{Director, Mat, Minors, Vector};

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, CoreError>;
