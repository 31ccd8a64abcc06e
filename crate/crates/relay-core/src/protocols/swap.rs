//! Entanglement swapping: closed forms for the conditional state and its
//! partially-transposed symplectic eigenvalue.

use nalgebra::DMatrix;

use crate::environment::KappaPair;
use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;

use super::network::SourceParams;

fn check_kappas(k: &KappaPair) -> Result<()> {
    if !(k.kappa.is_finite() && k.kappa_prime.is_finite() && k.kappa >= 0.0 && k.kappa_prime >= 0.0)
    {
        return Err(Error::InvalidParameter(format!(
            "kappa pair must be nonnegative, got ({}, {})",
            k.kappa, k.kappa_prime
        )));
    }
    Ok(())
}

/// Conditional covariance matrix of the remote pair `(a, b)` after the
/// relay's Bell detection, in terms of the effective noise parameters:
/// diagonal blocks `A = B = diag(mu - x, mu - x')` and correlation block
/// `C = diag(x, -x')` with `x = (mu^2 - 1) / (2 (mu + kappa))` and `x'`
/// the same with `kappa'`.
pub fn swap_conditional_cm(mu: f64, k: &KappaPair) -> Result<CovarianceMatrix> {
    let mu = SourceParams::new(mu)?.mu();
    check_kappas(k)?;
    let x = (mu * mu - 1.0) / (2.0 * (mu + k.kappa));
    let xp = (mu * mu - 1.0) / (2.0 * (mu + k.kappa_prime));
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = mu - x;
    m[(1, 1)] = mu - xp;
    m[(2, 2)] = mu - x;
    m[(3, 3)] = mu - xp;
    m[(0, 2)] = x;
    m[(2, 0)] = x;
    m[(1, 3)] = -xp;
    m[(3, 1)] = -xp;
    CovarianceMatrix::from_matrix(m)
}

/// Swapping figures of merit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapResult {
    /// Smallest partially-transposed symplectic eigenvalue of the swapped
    /// state: `sqrt((1 + mu kappa)(1 + mu kappa') / ((mu + kappa)(mu + kappa')))`.
    pub eps: f64,
    /// Large-`mu` optimum `sqrt(kappa kappa')`.
    pub eps_opt: f64,
    /// Swapped entanglement `max(0, -log2 eps)` in bits.
    pub log_negativity: f64,
}

/// Evaluate the swapping closed forms. Swapping succeeds (`eps < 1`) for any
/// `mu > 1` exactly when `kappa kappa' < 1`.
pub fn swap_eps(mu: f64, k: &KappaPair) -> Result<SwapResult> {
    let mu = SourceParams::new(mu)?.mu();
    check_kappas(k)?;
    let eps = ((1.0 + mu * k.kappa) * (1.0 + mu * k.kappa_prime)
        / ((mu + k.kappa) * (mu + k.kappa_prime)))
        .sqrt();
    let eps_opt = (k.kappa * k.kappa_prime).sqrt();
    Ok(SwapResult {
        eps,
        eps_opt,
        log_negativity: (-eps.log2()).max(0.0),
    })
}
