//! Pre-measurement state of the relay network.

use crate::environment::{classify, environment_cm, AdditiveEnvironmentParams, EnvironmentParams};
use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, GaussianState};

/// Source parameter: EPR variance (entanglement-based protocols) or
/// modulation variance plus one (coherent-state protocols).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceParams {
    mu: f64,
}

impl SourceParams {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "source variance must be >= 1, got {mu}"
            )));
        }
        Ok(Self { mu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

/// Four-mode state over `(a, b, A', B')` right before the relay's Bell
/// detection: the remote modes kept by the parties and the two transmitted
/// modes after the environment.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    state: GaussianState,
}

impl NetworkState {
    pub fn state(&self) -> &GaussianState {
        &self.state
    }

    pub fn cm(&self) -> &CovarianceMatrix {
        self.state.cm()
    }
}

/// Send the partner modes of two EPR pairs through the correlated thermal
/// environment: start from `V(mu)_aA (x) V(mu)_bB (x) V_E1E2`, mix `(A, E1)`
/// and `(B, E2)` on beamsplitters of transmissivity `tau`, discard the
/// environment outputs and reorder to `(a, b, A', B')`.
pub fn build_network_state(mu: f64, env: &EnvironmentParams) -> Result<NetworkState> {
    let mu = SourceParams::new(mu)?.mu();
    if !classify(env).physical {
        return Err(Error::UnphysicalEnvironment(format!(
            "environment (omega = {}, g = {}, g' = {}) is not a bona-fide state",
            env.omega(),
            env.g(),
            env.g_prime()
        )));
    }
    let epr = CovarianceMatrix::epr(mu)?;
    // Mode order: (a, A, b, B, E1, E2).
    let v = epr
        .tensor(&epr)
        .tensor(&environment_cm(env.omega(), env.g(), env.g_prime())?);
    let v = v.apply_beamsplitter(1, 4, env.tau())?;
    let v = v.apply_beamsplitter(3, 5, env.tau())?;
    let v = v.trace_out(&[4, 5])?;
    // (a, A', b, B') -> (a, b, A', B').
    let v = v.permute_modes(&[0, 2, 1, 3])?;
    Ok(NetworkState {
        state: GaussianState::zero_mean(v),
    })
}

/// Same network in the correlated-additive limit: the transmitted modes pick
/// up classical displacement noise with covariance `V(n, c, c')` and no loss.
pub fn build_additive_network_state(
    mu: f64,
    add: &AdditiveEnvironmentParams,
) -> Result<NetworkState> {
    let mu = SourceParams::new(mu)?.mu();
    let epr = CovarianceMatrix::epr(mu)?;
    // Mode order: (a, A, b, B); noise acts on (A, B).
    let v = epr.tensor(&epr);
    let mut m = v.matrix().clone();
    let noise = add.classical_noise_cm();
    let rows = [2usize, 3, 6, 7];
    for (i, &ri) in rows.iter().enumerate() {
        for (j, &rj) in rows.iter().enumerate() {
            m[(ri, rj)] += noise[(i, j)];
        }
    }
    let v = CovarianceMatrix::from_matrix(m)?.permute_modes(&[0, 2, 1, 3])?;
    Ok(NetworkState {
        state: GaussianState::zero_mean(v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lossless_limit_recovers_two_epr_pairs() {
        let env = EnvironmentParams::new(1.0 - 1e-9, 5.0, 0.0, 0.0).unwrap();
        let ns = build_network_state(3.0, &env).unwrap();
        let m = ns.cm().matrix();
        // a <-> b cross block vanishes; a <-> A' keeps the EPR correlation.
        for i in 0..2 {
            for j in 2..4 {
                assert!(m[(i, j)].abs() < 1e-3, "a-b block not ~0: {}", m[(i, j)]);
            }
        }
        assert_relative_eq!(m[(0, 4)], (9.0f64 - 1.0).sqrt(), epsilon = 1e-3);
    }

    #[test]
    fn markovian_network_has_independent_links() {
        let env = EnvironmentParams::new(0.8, 4.0, 0.0, 0.0).unwrap();
        let ns = build_network_state(2.0, &env).unwrap();
        let m = ns.cm().matrix();
        // (a, b) and (A', B') cross blocks are zero for g = g' = 0.
        for i in 0..2 {
            for j in 2..4 {
                assert_relative_eq!(m[(i, j)], 0.0, epsilon = 1e-12);
            }
        }
        for i in 4..6 {
            for j in 6..8 {
                assert_relative_eq!(m[(i, j)], 0.0, epsilon = 1e-12);
            }
        }
        // Transmitted-mode variance: tau mu + (1 - tau) omega.
        assert_relative_eq!(m[(4, 4)], 0.8 * 2.0 + 0.2 * 4.0, epsilon = 1e-12);
    }

    #[test]
    fn unphysical_environment_rejected() {
        let env = EnvironmentParams::new(0.9, 2.0, 1.9, 0.0).unwrap();
        assert!(build_network_state(2.0, &env).is_err());
    }

    #[test]
    fn additive_network_at_zero_noise_is_two_epr_pairs() {
        let add = AdditiveEnvironmentParams::new(0.0, 1.0, 1.0).unwrap();
        let ns = build_additive_network_state(4.0, &add).unwrap();
        let m = ns.cm().matrix();
        assert_relative_eq!(m[(4, 4)], 4.0, epsilon = 1e-12);
        assert_relative_eq!(m[(0, 4)], 15.0f64.sqrt(), epsilon = 1e-12);
        for i in 0..2 {
            for j in 2..4 {
                assert_relative_eq!(m[(i, j)], 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn additive_network_noise_enters_transmitted_blocks() {
        let add = AdditiveEnvironmentParams::new(2.0, 1.0, -0.5).unwrap();
        let ns = build_additive_network_state(3.0, &add).unwrap();
        let m = ns.cm().matrix();
        // q_A' variance mu + n; q_A' q_B' correlation n c; p-side n c'.
        assert_relative_eq!(m[(4, 4)], 5.0, epsilon = 1e-12);
        assert_relative_eq!(m[(4, 6)], 2.0, epsilon = 1e-12);
        assert_relative_eq!(m[(5, 7)], -1.0, epsilon = 1e-12);
    }
}
