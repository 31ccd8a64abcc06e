//! Entanglement distillation and ideal key distillation.
//!
//! Both rates are lower-bounded by the coherent information of the swapped
//! state, `I_C = S(rho_b) - S(rho_ab|gamma)`; asymptotically in `mu` it
//! approaches `-log2(e * eps_opt)`, so distillation survives exactly while
//! `eps_opt < 1/e`.

use std::f64::consts::E;

use crate::environment::KappaPair;
use crate::error::Result;
use crate::gaussian::{von_neumann_entropy, CovarianceMatrix};

use super::swap::{swap_conditional_cm, swap_eps};

/// Coherent information of the swapped state, in bits per relay use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentInfo {
    pub i_c: f64,
    /// Large-`mu` form `-log2(e * eps_opt)`; plus infinity when
    /// `eps_opt = 0` (noiseless limit).
    pub i_c_asymptotic: f64,
}

/// `S(V_b) - S(V)` for a two-mode conditional state over `(a, b)`.
pub fn coherent_info_from_cm(v: &CovarianceMatrix) -> Result<f64> {
    let v_b = v.trace_out(&[0])?;
    Ok(von_neumann_entropy(&v_b) - von_neumann_entropy(v))
}

/// Evaluate the coherent information from the closed-form conditional state.
pub fn coherent_information(mu: f64, k: &KappaPair) -> Result<CoherentInfo> {
    let v = swap_conditional_cm(mu, k)?;
    let eps_opt = swap_eps(mu, k)?.eps_opt;
    let i_c_asymptotic = if eps_opt > 0.0 {
        -(E * eps_opt).log2()
    } else {
        f64::INFINITY
    };
    Ok(CoherentInfo {
        i_c: coherent_info_from_cm(&v)?,
        i_c_asymptotic,
    })
}
