//! The relay's continuous-variable Bell detection.

use nalgebra::{DMatrix, Matrix2};

use crate::error::Result;
use crate::gaussian::{condition_on_homodyne, GaussianState, Quadrature};

use super::network::NetworkState;

/// Which quadrature pair the relay reads out.
///
/// The default measures `q- = (q_A' - q_B')/sqrt(2)` and
/// `p+ = (p_A' + p_B')/sqrt(2)`, which favours environments with `g > 0`,
/// `g' < 0`. The alternative `(q+, p-)` detection mirrors every performance
/// region through the origin of the correlation plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BellConvention {
    #[default]
    QMinusPPlus,
    QPlusPMinus,
}

/// Bell-detection outcome, combined into `gamma = re + i im`
/// (`q-` and `p+` under the default convention).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellOutcome {
    pub re: f64,
    pub im: f64,
}

impl BellOutcome {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }
}

/// Conditional description of the kept modes after the Bell detection.
#[derive(Debug, Clone)]
pub struct BellConditioned {
    /// State of the kept modes for zero outcome. The covariance matrix is
    /// outcome-independent.
    pub state: GaussianState,
    /// Linear response of the kept means to the outcome pair
    /// (`2 n_kept x 2`): `mean(gamma) = mean(0) + response * (re, im)^T`.
    pub mean_response: DMatrix<f64>,
    /// Covariance of the outcome pair.
    pub outcome_cov: Matrix2<f64>,
}

/// Mix two modes of `state` on a balanced beamsplitter and homodyne the
/// `q` quadrature of the difference port and `p` of the sum port
/// (interchanged under [`BellConvention::QPlusPMinus`]).
///
/// `a_slot`/`b_slot` are the modes playing `A'`/`B'`; the difference port
/// lands on `a_slot`.
pub(crate) fn bell_detect(
    state: &GaussianState,
    a_slot: usize,
    b_slot: usize,
    convention: BellConvention,
    outcome: BellOutcome,
) -> Result<GaussianState> {
    let mixed = state.apply_beamsplitter(b_slot, a_slot, 0.5)?;
    let (q_port, p_port) = match convention {
        BellConvention::QMinusPPlus => (a_slot, b_slot),
        BellConvention::QPlusPMinus => (b_slot, a_slot),
    };
    let after_q = condition_on_homodyne(&mixed, q_port, Quadrature::Q, outcome.re)?;
    let p_port = if p_port > q_port { p_port - 1 } else { p_port };
    condition_on_homodyne(&after_q, p_port, Quadrature::P, outcome.im)
}

/// [`bell_detect`] plus the outcome statistics needed by consumers of the
/// conditional mean (teleportation): the mean-response matrix and the
/// classical covariance of the outcome pair.
pub(crate) fn bell_detect_full(
    state: &GaussianState,
    a_slot: usize,
    b_slot: usize,
    convention: BellConvention,
) -> Result<BellConditioned> {
    let zero = bell_detect(state, a_slot, b_slot, convention, BellOutcome::new(0.0, 0.0))?;
    let on_q = bell_detect(state, a_slot, b_slot, convention, BellOutcome::new(1.0, 0.0))?;
    let on_p = bell_detect(state, a_slot, b_slot, convention, BellOutcome::new(0.0, 1.0))?;
    let dim = zero.mean().len();
    let mut mean_response = DMatrix::zeros(dim, 2);
    for r in 0..dim {
        mean_response[(r, 0)] = on_q.mean()[r] - zero.mean()[r];
        mean_response[(r, 1)] = on_p.mean()[r] - zero.mean()[r];
    }

    let mixed = state.apply_beamsplitter(b_slot, a_slot, 0.5)?;
    let (q_port, p_port) = match convention {
        BellConvention::QMinusPPlus => (a_slot, b_slot),
        BellConvention::QPlusPMinus => (b_slot, a_slot),
    };
    let v = mixed.cm().matrix();
    let (iq, ip) = (2 * q_port, 2 * p_port + 1);
    let outcome_cov = Matrix2::new(v[(iq, iq)], v[(iq, ip)], v[(ip, iq)], v[(ip, ip)]);

    Ok(BellConditioned {
        state: zero,
        mean_response,
        outcome_cov,
    })
}

/// Bell-detect the transmitted modes `(A', B')` of a four-mode network state
/// and return the conditional state of the remote pair `(a, b)`.
pub fn bell_condition(
    ns: &NetworkState,
    convention: BellConvention,
    outcome: BellOutcome,
) -> Result<GaussianState> {
    bell_detect(ns.state(), 2, 3, convention, outcome)
}

/// [`bell_condition`] with the outcome statistics attached.
pub fn bell_condition_full(ns: &NetworkState, convention: BellConvention) -> Result<BellConditioned> {
    bell_detect_full(ns.state(), 2, 3, convention)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::EnvironmentParams;
    use crate::protocols::network::build_network_state;
    use approx::assert_relative_eq;

    #[test]
    fn bell_on_unentangled_sources_leaves_two_vacua() {
        let env = EnvironmentParams::new(0.9, 19.38, 0.0, 0.0).unwrap();
        let ns = build_network_state(1.0, &env).unwrap();
        let out = bell_condition(&ns, BellConvention::default(), BellOutcome::new(0.3, -0.7))
            .unwrap();
        assert_eq!(out.n_modes(), 2);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(out.cm().matrix()[(i, j)], expect, epsilon = 1e-9);
            }
        }
        // Nothing to swap: the outcome cannot displace the remote modes.
        for k in 0..4 {
            assert_relative_eq!(out.mean()[k], 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn conditional_cm_is_outcome_independent_and_mean_linear() {
        let env = EnvironmentParams::new(0.9, 19.38, 15.0, -15.0).unwrap();
        let ns = build_network_state(5.0, &env).unwrap();
        let o1 = bell_condition(&ns, BellConvention::default(), BellOutcome::new(1.0, 2.0))
            .unwrap();
        let o2 = bell_condition(&ns, BellConvention::default(), BellOutcome::new(-2.0, 0.5))
            .unwrap();
        assert_eq!(o1.cm().matrix(), o2.cm().matrix());

        let full = bell_condition_full(&ns, BellConvention::default()).unwrap();
        let predicted = &full.mean_response * nalgebra::Vector2::new(1.0, 2.0);
        for k in 0..4 {
            assert_relative_eq!(o1.mean()[k], predicted[k], epsilon = 1e-9);
        }
    }

    #[test]
    fn outcome_covariance_matches_block_formulas() {
        // Var(q-) = tau (mu + kappa), Var(p+) = tau (mu + kappa').
        let env = EnvironmentParams::new(0.9, 19.38, 15.0, -15.0).unwrap();
        let k = crate::environment::kappas(&env);
        let mu = 5.0;
        let ns = build_network_state(mu, &env).unwrap();
        let full = bell_condition_full(&ns, BellConvention::default()).unwrap();
        assert_relative_eq!(full.outcome_cov[(0, 0)], 0.9 * (mu + k.kappa), epsilon = 1e-9);
        assert_relative_eq!(
            full.outcome_cov[(1, 1)],
            0.9 * (mu + k.kappa_prime),
            epsilon = 1e-9
        );
        assert_relative_eq!(full.outcome_cov[(0, 1)], 0.0, epsilon = 1e-9);
    }
}
