//! Coherent-state teleportation through the relay.
//!
//! Alice's input mode and one arm of Bob's EPR pair travel to the relay;
//! after the Bell outcome is broadcast, Bob displaces his kept mode by
//! `gain * sqrt(2 / tau) * (re, im)` (amplitude-preserving at `gain = 1`,
//! sign-adjusted under the alternate detection convention). The reported
//! fidelity is the overlap of the outcome-averaged output with the input,
//! evaluated at zero input amplitude, where it is a pure covariance
//! functional.

use nalgebra::Matrix2;

use crate::environment::{environment_cm, kappas, EnvironmentParams, KappaPair};
use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, GaussianState};

use super::bell::{bell_detect_full, BellConvention};
use super::network::SourceParams;

/// Teleportation fidelity at the configured gain, plus the large-`mu`
/// optimum `F_opt = ((1 + kappa)(1 + kappa'))^{-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportFidelity {
    pub fidelity: f64,
    pub fidelity_opt: f64,
}

fn check_gain(gain: f64) -> Result<()> {
    if !(gain.is_finite() && gain >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "teleportation gain must be >= 0, got {gain}"
        )));
    }
    Ok(())
}

/// Asymptotic optimum of the fidelity.
pub fn teleport_fidelity_opt(k: &KappaPair) -> f64 {
    1.0 / ((1.0 + k.kappa) * (1.0 + k.kappa_prime)).sqrt()
}

/// Average output fidelity from a Bell-conditioned one-mode description:
/// `V_out = V_cond + M Gamma M^T` with `M = L + gain * G`, `L` the
/// conditional-mean response and `G` the fixed displacement map.
fn fidelity_from_parts(
    cond_cm: &CovarianceMatrix,
    response: &Matrix2<f64>,
    outcome_cov: &Matrix2<f64>,
    displacement: &Matrix2<f64>,
) -> Result<f64> {
    let m = response + displacement;
    let extra = m * outcome_cov * m.transpose();
    let mut v = cond_cm.matrix().clone();
    for i in 0..2 {
        for j in 0..2 {
            v[(i, j)] += 0.5 * (extra[(i, j)] + extra[(j, i)]);
        }
    }
    let out = GaussianState::zero_mean(CovarianceMatrix::from_matrix(v)?);
    out.coherent_fidelity([0.0, 0.0])
}

/// Teleport through the thermal environment using the full pipeline:
/// build the three travelling modes, mix with the environment ancillas,
/// Bell-detect and apply Bob's displacement.
pub fn teleport_fidelity(
    mu: f64,
    env: &EnvironmentParams,
    gain: f64,
    convention: BellConvention,
) -> Result<TeleportFidelity> {
    let mu = SourceParams::new(mu)?.mu();
    check_gain(gain)?;
    // Mode order: (b, B, A, E1, E2); Alice's input A is a coherent state.
    let v = CovarianceMatrix::epr(mu)?
        .tensor(&CovarianceMatrix::vacuum(1))
        .tensor(&environment_cm(env.omega(), env.g(), env.g_prime())?);
    let v = v.apply_beamsplitter(2, 3, env.tau())?;
    let v = v.apply_beamsplitter(1, 4, env.tau())?;
    let v = v.trace_out(&[3, 4])?;
    // Modes now (b, B', A').
    let bc = bell_detect_full(&GaussianState::zero_mean(v), 2, 1, convention)?;

    let c = (2.0 / env.tau()).sqrt();
    let sign = match convention {
        BellConvention::QMinusPPlus => 1.0,
        BellConvention::QPlusPMinus => -1.0,
    };
    let displacement = Matrix2::from_diagonal_element(sign * gain * c);
    let response = Matrix2::new(
        bc.mean_response[(0, 0)],
        bc.mean_response[(0, 1)],
        bc.mean_response[(1, 0)],
        bc.mean_response[(1, 1)],
    );
    let fidelity = fidelity_from_parts(bc.state.cm(), &response, &bc.outcome_cov, &displacement)?;

    let k = match convention {
        BellConvention::QMinusPPlus => kappas(env),
        BellConvention::QPlusPMinus => {
            let mirrored =
                EnvironmentParams::new(env.tau(), env.omega(), -env.g(), -env.g_prime())?;
            kappas(&mirrored)
        }
    };
    Ok(TeleportFidelity {
        fidelity,
        fidelity_opt: teleport_fidelity_opt(&k),
    })
}

/// Closed form of the same fidelity in terms of the kappa pair; per
/// quadrature `V_out = mu - (mu^2 - 1)/d + (gain - s)^2 d` with
/// `d = 1 + mu + 2 kappa` and `s = sqrt(mu^2 - 1)/d`.
pub fn teleport_fidelity_from_kappas(
    mu: f64,
    k: &KappaPair,
    gain: f64,
) -> Result<TeleportFidelity> {
    let mu = SourceParams::new(mu)?.mu();
    check_gain(gain)?;
    let quad_var = |kappa: f64| -> f64 {
        let d = 1.0 + mu + 2.0 * kappa;
        let s = (mu * mu - 1.0).sqrt() / d;
        mu - (mu * mu - 1.0) / d + (gain - s) * (gain - s) * d
    };
    let vq = quad_var(k.kappa);
    let vp = quad_var(k.kappa_prime);
    Ok(TeleportFidelity {
        fidelity: 2.0 / ((vq + 1.0) * (vp + 1.0)).sqrt(),
        fidelity_opt: teleport_fidelity_opt(k),
    })
}

/// Pipeline fidelity in the correlated-additive limit: no loss, classical
/// displacement noise on the travelling modes, unit-amplitude displacement
/// `sqrt(2)`.
pub fn teleport_fidelity_additive(
    mu: f64,
    add: &crate::environment::AdditiveEnvironmentParams,
    gain: f64,
    convention: BellConvention,
) -> Result<TeleportFidelity> {
    let mu = SourceParams::new(mu)?.mu();
    check_gain(gain)?;
    // Mode order: (b, B, A); noise CM is ordered (A, B).
    let v = CovarianceMatrix::epr(mu)?.tensor(&CovarianceMatrix::vacuum(1));
    let mut m = v.matrix().clone();
    let noise = add.classical_noise_cm();
    let rows = [4usize, 5, 2, 3];
    for (i, &ri) in rows.iter().enumerate() {
        for (j, &rj) in rows.iter().enumerate() {
            m[(ri, rj)] += noise[(i, j)];
        }
    }
    let v = CovarianceMatrix::from_matrix(m)?;
    let bc = bell_detect_full(&GaussianState::zero_mean(v), 2, 1, convention)?;

    let sign = match convention {
        BellConvention::QMinusPPlus => 1.0,
        BellConvention::QPlusPMinus => -1.0,
    };
    let displacement = Matrix2::from_diagonal_element(sign * gain * 2.0f64.sqrt());
    let response = Matrix2::new(
        bc.mean_response[(0, 0)],
        bc.mean_response[(0, 1)],
        bc.mean_response[(1, 0)],
        bc.mean_response[(1, 1)],
    );
    let fidelity = fidelity_from_parts(bc.state.cm(), &response, &bc.outcome_cov, &displacement)?;
    let k = crate::environment::additive_kappas(add);
    Ok(TeleportFidelity {
        fidelity,
        fidelity_opt: teleport_fidelity_opt(&k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ideal_channel_noise_matches_textbook_form() {
        // kappa = 0: V_out = 1 + 2 (mu - sqrt(mu^2 - 1)) at unit gain.
        let k = KappaPair {
            kappa: 0.0,
            kappa_prime: 0.0,
        };
        for mu in [1.0, 2.0, 10.0] {
            let f = teleport_fidelity_from_kappas(mu, &k, 1.0).unwrap();
            let vout = 1.0 + 2.0 * (mu - (mu * mu - 1.0).sqrt());
            assert_relative_eq!(f.fidelity, 2.0 / (vout + 1.0), epsilon = 1e-12);
        }
    }

    #[test]
    fn machinery_matches_closed_form() {
        let mut rng = crate::testutil::SplitMix64::new(9);
        for _ in 0..50 {
            let env = crate::testutil::sample_separable_env(&mut rng);
            let mu = rng.range(1.0, 50.0);
            let gain = rng.range(0.0, 1.5);
            let a = teleport_fidelity(mu, &env, gain, BellConvention::QMinusPPlus).unwrap();
            let b = teleport_fidelity_from_kappas(mu, &kappas(&env), gain).unwrap();
            assert_relative_eq!(a.fidelity, b.fidelity, epsilon = 1e-9);
            assert_relative_eq!(a.fidelity_opt, b.fidelity_opt, epsilon = 1e-12);
        }
    }

    #[test]
    fn asymptotic_fidelity_values() {
        // Antidiagonal correlations: F -> 1/(1 + eps_opt).
        let env = EnvironmentParams::new(0.9, 19.38, 15.0, -15.0).unwrap();
        let f = teleport_fidelity(1e6, &env, 1.0, BellConvention::QMinusPPlus).unwrap();
        assert_relative_eq!(f.fidelity_opt, 0.6727, epsilon = 1e-4);
        assert_relative_eq!(f.fidelity, f.fidelity_opt, epsilon = 1e-3);

        // Markovian entanglement-breaking noise: classical regime.
        let env = EnvironmentParams::new(0.9, 19.38, 0.0, 0.0).unwrap();
        let f = teleport_fidelity(1e6, &env, 1.0, BellConvention::QMinusPPlus).unwrap();
        assert_relative_eq!(f.fidelity_opt, 0.317, epsilon = 1e-3);
        assert!(f.fidelity_opt <= 0.5);
    }

    #[test]
    fn fidelity_opt_bounded_by_swap_optimum() {
        // F_opt <= (1 + eps_opt)^{-1}, equality only on g + g' = 0.
        let mut rng = crate::testutil::SplitMix64::new(5);
        for _ in 0..500 {
            let env = crate::testutil::sample_separable_env(&mut rng);
            let k = kappas(&env);
            let f_opt = teleport_fidelity_opt(&k);
            let bound = 1.0 / (1.0 + (k.kappa * k.kappa_prime).sqrt());
            assert!(f_opt <= bound + 1e-12);
            if (env.g() + env.g_prime()).abs() < 1e-9 {
                assert_relative_eq!(f_opt, bound, epsilon = 1e-9);
            }
        }
        let env = EnvironmentParams::new(0.7, 5.0, 3.0, -3.0).unwrap();
        let k = kappas(&env);
        assert_relative_eq!(
            teleport_fidelity_opt(&k),
            1.0 / (1.0 + (k.kappa * k.kappa_prime).sqrt()),
            epsilon = 1e-12
        );
    }

    #[test]
    fn alternate_convention_mirrors_the_correlation_plane() {
        let mu = 20.0;
        let fwd_env = EnvironmentParams::new(0.9, 19.38, 12.0, -9.0).unwrap();
        let rev_env = EnvironmentParams::new(0.9, 19.38, -12.0, 9.0).unwrap();
        let fwd = teleport_fidelity(mu, &fwd_env, 1.0, BellConvention::QMinusPPlus).unwrap();
        let rev = teleport_fidelity(mu, &rev_env, 1.0, BellConvention::QPlusPMinus).unwrap();
        assert_relative_eq!(fwd.fidelity, rev.fidelity, epsilon = 1e-9);
        assert_relative_eq!(fwd.fidelity_opt, rev.fidelity_opt, epsilon = 1e-12);
    }

    #[test]
    fn additive_machinery_matches_kappa_form() {
        use crate::environment::{additive_kappas, AdditiveEnvironmentParams};
        for (n, c, cp) in [(0.0, 0.0, 0.0), (2.5, 1.0, 1.0), (1.3, -0.4, 0.8)] {
            let add = AdditiveEnvironmentParams::new(n, c, cp).unwrap();
            let a = teleport_fidelity_additive(52.0, &add, 1.0, BellConvention::QMinusPPlus)
                .unwrap();
            let b = teleport_fidelity_from_kappas(52.0, &additive_kappas(&add), 1.0).unwrap();
            assert_relative_eq!(a.fidelity, b.fidelity, epsilon = 1e-9);
        }
    }
}
