//! Correlated two-mode Gaussian environment.
//!
//! The two ancillary modes injecting noise into the relay links carry a
//! zero-mean Gaussian state with covariance matrix in symmetric normal form
//! `[[omega I, G], [G, omega I]]`, `G = diag(g, g')`. The diagonal `omega`
//! is local thermal noise, the block `G` holds the noise correlations that
//! make the two links non-Markovian.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussian::{entropy_h, von_neumann_entropy, CovarianceMatrix};

/// Tolerance on the boundary inequalities: boundary points count as
/// satisfying (the constraint set is closed).
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Parameters of the correlated thermal environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentParams {
    tau: f64,
    omega: f64,
    g: f64,
    g_prime: f64,
}

impl EnvironmentParams {
    /// `tau` must lie in `(0, 1)` and `omega >= 1`; the correlations `g`,
    /// `g_prime` are unrestricted here and judged by [`classify`].
    pub fn new(tau: f64, omega: f64, g: f64, g_prime: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0 && tau < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "transmissivity must lie in (0, 1), got {tau}"
            )));
        }
        if !(omega.is_finite() && omega >= 1.0 - BOUNDARY_TOL) {
            return Err(Error::InvalidParameter(format!(
                "thermal variance must be >= 1, got {omega}"
            )));
        }
        if !(g.is_finite() && g_prime.is_finite()) {
            return Err(Error::InvalidParameter(
                "correlations must be finite".into(),
            ));
        }
        Ok(Self {
            tau,
            omega: omega.max(1.0),
            g,
            g_prime,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn g_prime(&self) -> f64 {
        self.g_prime
    }
}

/// Parameters of the correlated-additive limit environment: classical
/// displacement noise of variance `n` with correlation coefficients
/// `c`, `c_prime` between the two links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdditiveEnvironmentParams {
    n: f64,
    c: f64,
    c_prime: f64,
}

impl AdditiveEnvironmentParams {
    pub fn new(n: f64, c: f64, c_prime: f64) -> Result<Self> {
        if !(n.is_finite() && n >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "additive noise variance must be >= 0, got {n}"
            )));
        }
        for (name, v) in [("c", c), ("c'", c_prime)] {
            if !(v.is_finite() && v.abs() <= 1.0 + BOUNDARY_TOL) {
                return Err(Error::InvalidParameter(format!(
                    "correlation coefficient {name} must lie in [-1, 1], got {v}"
                )));
            }
        }
        Ok(Self {
            n,
            c: c.clamp(-1.0, 1.0),
            c_prime: c_prime.clamp(-1.0, 1.0),
        })
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn c_prime(&self) -> f64 {
        self.c_prime
    }

    /// The environment is entanglement breaking for `n > 2`.
    pub fn entanglement_breaking(&self) -> bool {
        self.n > 2.0
    }

    /// Classical covariance matrix of the added displacements over the two
    /// transmitted modes: `n [[I, diag(c, c')], [diag(c, c'), I]]`. This is
    /// a noise matrix, not a state, so it may be singular (and is zero for
    /// `n = 0`).
    pub fn classical_noise_cm(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(4, 4);
        for k in 0..4 {
            m[(k, k)] = self.n;
        }
        m[(0, 2)] = self.n * self.c;
        m[(2, 0)] = self.n * self.c;
        m[(1, 3)] = self.n * self.c_prime;
        m[(3, 1)] = self.n * self.c_prime;
        m
    }
}

/// Effective noise parameters seen by the relay's Bell detection; they
/// absorb every environmental parameter that the protocol metrics depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaPair {
    pub kappa: f64,
    pub kappa_prime: f64,
}

/// Three-flag classification of an environment point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnvClassification {
    /// Bona-fide quantum state: `|g| < omega`, `|g'| < omega`,
    /// `omega |g + g'| <= omega^2 + g g' - 1`.
    pub physical: bool,
    /// Physical and additionally `omega |g - g'| <= omega^2 - g g' - 1`.
    pub separable: bool,
    /// `omega > (1 + tau) / (1 - tau)`: thermal noise beyond which no
    /// bipartite entanglement survives either link.
    pub entanglement_breaking: bool,
}

fn bona_fide_violation(omega: f64, g: f64, g_prime: f64) -> Option<String> {
    if g.abs() >= omega - BOUNDARY_TOL * omega {
        return Some(format!("|g| = {} is not below omega = {}", g.abs(), omega));
    }
    if g_prime.abs() >= omega - BOUNDARY_TOL * omega {
        return Some(format!(
            "|g'| = {} is not below omega = {}",
            g_prime.abs(),
            omega
        ));
    }
    let lhs = omega * (g + g_prime).abs();
    let rhs = omega * omega + g * g_prime - 1.0;
    if lhs > rhs + BOUNDARY_TOL * omega.max(1.0) {
        return Some(format!(
            "omega*|g + g'| = {lhs} exceeds omega^2 + g*g' - 1 = {rhs}"
        ));
    }
    None
}

fn separability_holds(omega: f64, g: f64, g_prime: f64) -> bool {
    let lhs = omega * (g - g_prime).abs();
    let rhs = omega * omega - g * g_prime - 1.0;
    lhs <= rhs + BOUNDARY_TOL * omega.max(1.0)
}

/// Covariance matrix of the two ancillary environment modes.
///
/// Rejects unphysical parameters, naming the violated inequality.
pub fn environment_cm(omega: f64, g: f64, g_prime: f64) -> Result<CovarianceMatrix> {
    if !(omega.is_finite() && omega >= 1.0 - BOUNDARY_TOL) {
        return Err(Error::UnphysicalEnvironment(format!(
            "thermal variance omega = {omega} must be >= 1"
        )));
    }
    if let Some(why) = bona_fide_violation(omega, g, g_prime) {
        return Err(Error::UnphysicalEnvironment(why));
    }
    let mut m = DMatrix::zeros(4, 4);
    for k in 0..4 {
        m[(k, k)] = omega;
    }
    m[(0, 2)] = g;
    m[(2, 0)] = g;
    m[(1, 3)] = g_prime;
    m[(3, 1)] = g_prime;
    CovarianceMatrix::from_matrix(m)
}

/// Classify an environment point. Never fails: sweep grids need
/// out-of-domain points labeled, not rejected.
pub fn classify(env: &EnvironmentParams) -> EnvClassification {
    let physical = bona_fide_violation(env.omega, env.g, env.g_prime).is_none();
    let separable = physical && separability_holds(env.omega, env.g, env.g_prime);
    let entanglement_breaking = env.omega > eb_threshold(env.tau).expect("tau validated");
    EnvClassification {
        physical,
        separable,
        entanglement_breaking,
    }
}

/// Entanglement-breaking threshold `omega_EB(tau) = (1 + tau) / (1 - tau)`.
pub fn eb_threshold(tau: f64) -> Result<f64> {
    if !(tau.is_finite() && tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "transmissivity must lie in (0, 1), got {tau}"
        )));
    }
    Ok((1.0 + tau) / (1.0 - tau))
}

/// Quantum mutual information of the two environment modes, in bits,
/// computed through the entropies of the full and reduced states.
pub fn env_mutual_info(omega: f64, g: f64, g_prime: f64) -> Result<f64> {
    let v = environment_cm(omega, g, g_prime)?;
    let s1 = von_neumann_entropy(&v.trace_out(&[1])?);
    let s2 = von_neumann_entropy(&v.trace_out(&[0])?);
    let s12 = von_neumann_entropy(&v);
    Ok((s1 + s2 - s12).max(0.0))
}

/// Closed form of the environment's symplectic spectrum,
/// `nu_pm = sqrt((omega +- g)(omega +- g'))`; used as an oracle against the
/// generic spectrum routine.
pub fn env_spectrum_closed_form(omega: f64, g: f64, g_prime: f64) -> (f64, f64) {
    let plus = ((omega + g) * (omega + g_prime)).sqrt();
    let minus = ((omega - g) * (omega - g_prime)).sqrt();
    (plus.min(minus), plus.max(minus))
}

/// Effective Bell-detection noise parameters
/// `kappa = (1/tau - 1)(omega - g)`, `kappa' = (1/tau - 1)(omega + g')`.
pub fn kappas(env: &EnvironmentParams) -> KappaPair {
    let f = 1.0 / env.tau - 1.0;
    KappaPair {
        kappa: f * (env.omega - env.g),
        kappa_prime: f * (env.omega + env.g_prime),
    }
}

/// The kappa pair in the correlated-additive limit (`tau -> 1`,
/// `omega -> inf` at fixed `n`, `c`, `c'`): `kappa = n(1 - c)`,
/// `kappa' = n(1 + c')`.
pub fn additive_kappas(add: &AdditiveEnvironmentParams) -> KappaPair {
    KappaPair {
        kappa: add.n * (1.0 - add.c),
        kappa_prime: add.n * (1.0 + add.c_prime),
    }
}

/// Mutual information closed form `2h(omega) - h(nu_+) - h(nu_-)`; oracle
/// for [`env_mutual_info`].
pub fn env_mutual_info_closed_form(omega: f64, g: f64, g_prime: f64) -> Result<f64> {
    let (lo, hi) = env_spectrum_closed_form(omega, g, g_prime);
    Ok((2.0 * entropy_h(omega)? - entropy_h(lo)? - entropy_h(hi)?).max(0.0))
}
