//! Convention-fixed Gaussian-state algebra.
//!
//! Conventions (fixed once, used everywhere):
//! - quadrature ordering `(q1, p1, q2, p2, ...)`;
//! - vacuum covariance matrix = identity (shot-noise units), so thermal
//!   variances satisfy `omega >= 1` and EPR variances `mu >= 1`;
//! - coherent amplitude `a` maps to the mean `(2 Re a, 2 Im a)`.

pub mod audit;
mod cm;
mod measure;
mod spectrum;
mod state;

pub use cm::{
    symplectic_form, CovarianceMatrix, SymplecticEigenvalues, PHYSICALITY_TOL, SYMMETRY_TOL,
};
pub use measure::{condition_on_heterodyne, condition_on_homodyne, Quadrature};
pub use spectrum::{entropy_h, log_negativity, ppt_min_eigenvalue, von_neumann_entropy};
pub use state::GaussianState;
