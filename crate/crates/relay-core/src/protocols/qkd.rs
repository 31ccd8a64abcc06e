//! Practical QKD through the untrusted relay.
//!
//! Entanglement-based evaluation of the heterodyne protocol: the parties'
//! mutual information comes from the classical joint statistics of the two
//! heterodyne outcomes, the eavesdropper's Holevo bound from purification
//! (reverse reconciliation, conditioned on Bob's heterodyne).

use std::f64::consts::E;

use crate::environment::KappaPair;
use crate::error::{Error, Result};
use crate::gaussian::{
    condition_on_heterodyne, entropy_h, von_neumann_entropy, CovarianceMatrix, GaussianState,
};

use super::swap::swap_conditional_cm;
use super::teleport::teleport_fidelity_opt;

/// Secret-key rate decomposition, all in bits per relay use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QkdRate {
    /// `xi * I_AB - chi`.
    pub rate: f64,
    /// Alice-Bob mutual information `I_AB`.
    pub mutual_info: f64,
    /// Eve's Holevo bound `chi`.
    pub holevo: f64,
}

/// Right-hand side of the optimal-rate bound; diverges when `eps_opt = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateBound {
    Finite(f64),
    Unbounded,
}

impl RateBound {
    pub fn finite(&self) -> Option<f64> {
        match self {
            RateBound::Finite(v) => Some(*v),
            RateBound::Unbounded => None,
        }
    }
}

fn check_xi(xi: f64) -> Result<()> {
    if !(xi.is_finite() && (0.0..=1.0).contains(&xi)) {
        return Err(Error::InvalidParameter(format!(
            "reconciliation efficiency must lie in [0, 1], got {xi}"
        )));
    }
    Ok(())
}

/// Key rate from a two-mode conditional state over `(a, b)`.
///
/// `I_AB` uses the classical covariance of the two heterodyne outcomes,
/// `Gamma = V + I` (any global outcome rescaling cancels in the determinant
/// ratio); `chi = S(V) - S(V_a | het b)` by purification.
pub fn qkd_rate_from_cm(xi: f64, v: &CovarianceMatrix) -> Result<QkdRate> {
    check_xi(xi)?;
    let m = v.matrix();
    let det2 = |r: usize, c: usize| -> f64 {
        (m[(r, r)] + 1.0) * (m[(c, c)] + 1.0) - m[(r, c)] * m[(c, r)]
    };
    let det_a = det2(0, 1);
    let det_b = det2(2, 3);
    let mut gamma = m.clone();
    for i in 0..4 {
        gamma[(i, i)] += 1.0;
    }
    let det_gamma = gamma.determinant();
    let mutual_info = 0.5 * (det_a * det_b / det_gamma).log2();

    let s_ab = von_neumann_entropy(v);
    let conditioned = condition_on_heterodyne(&GaussianState::zero_mean(v.clone()), 1, (0.0, 0.0))?;
    let holevo = s_ab - von_neumann_entropy(conditioned.cm());

    Ok(QkdRate {
        rate: xi * mutual_info - holevo,
        mutual_info,
        holevo,
    })
}

/// Key rate of the heterodyne protocol at modulation-plus-one variance `mu`
/// and reconciliation efficiency `xi`, through the swapped-state closed form.
pub fn qkd_rate(xi: f64, mu: f64, k: &KappaPair) -> Result<QkdRate> {
    let v = swap_conditional_cm(mu, k)?;
    qkd_rate_from_cm(xi, &v)
}

/// Large-`mu` lower bound on the optimal key rate:
/// `log2(F_opt / (e^2 eps_opt)) + h(1 + 2 eps_opt)`.
///
/// Positive only for `eps_opt` below roughly `0.192`. At `eps_opt = 0` the
/// logarithm diverges, which is reported as [`RateBound::Unbounded`] rather
/// than an error; finite-`mu` rates stay the meaningful quantity there.
pub fn qkd_rate_opt_bound(k: &KappaPair) -> Result<RateBound> {
    if !(k.kappa >= 0.0 && k.kappa_prime >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "kappa pair must be nonnegative, got ({}, {})",
            k.kappa, k.kappa_prime
        )));
    }
    let eps_opt = (k.kappa * k.kappa_prime).sqrt();
    if eps_opt == 0.0 {
        return Ok(RateBound::Unbounded);
    }
    let f_opt = teleport_fidelity_opt(k);
    let value = (f_opt / (E * E * eps_opt)).log2() + entropy_h(1.0 + 2.0 * eps_opt)?;
    Ok(RateBound::Finite(value))
}
