//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not symmetric (max |V - V^T| = {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix has non-finite entries")]
    NotFinite,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("covariance matrix violates the uncertainty principle (nu_min = {nu_min:.12e})")]
    Unphysical { nu_min: f64 },

    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("mode subset must be a nonempty proper subset of the {n_modes} modes")]
    InvalidModeSubset { n_modes: usize },

    #[error("unphysical environment: {0}")]
    UnphysicalEnvironment(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
