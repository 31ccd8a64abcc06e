//! Per-point bundles of every protocol figure of merit, as consumed by
//! sweep drivers.

use crate::environment::{
    additive_kappas, classify, env_mutual_info, kappas, AdditiveEnvironmentParams,
    EnvClassification, EnvironmentParams, KappaPair,
};
use crate::error::Result;
use crate::gaussian::ppt_min_eigenvalue;

use super::bell::{bell_condition, BellConvention, BellOutcome};
use super::distill::{coherent_info_from_cm, coherent_information};
use super::network::{build_additive_network_state, build_network_state};
use super::qkd::{qkd_rate, qkd_rate_from_cm, qkd_rate_opt_bound, RateBound};
use super::structure::{entanglement_structure, EntanglementStructure};
use super::swap::swap_eps;
use super::teleport::{teleport_fidelity_additive, teleport_fidelity_from_kappas};

/// Every protocol figure of merit at one parameter point.
///
/// Entanglement-based quantities (`eps`, `log_negativity`, `fidelity`,
/// `coherent_info`) are evaluated at the source variance `mu_ent`; the
/// practical QKD rate at the modulation variance `mu_qkd`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolMetrics {
    pub eps: f64,
    pub eps_opt: f64,
    pub log_negativity: f64,
    pub fidelity: f64,
    pub fidelity_opt: f64,
    pub coherent_info: f64,
    /// Ideal key distillation is lower-bounded by the coherent information.
    pub key_distill_bound: f64,
    pub qkd_rate: f64,
    pub qkd_mutual_info: f64,
    pub qkd_holevo: f64,
    pub qkd_rate_opt_bound: RateBound,
    pub recon_efficiency: f64,
    pub teleport_gain: f64,
}

/// Evaluate all metrics from an effective noise pair.
pub fn metrics_from_kappas(
    xi: f64,
    mu_ent: f64,
    mu_qkd: f64,
    k: &KappaPair,
    gain: f64,
) -> Result<ProtocolMetrics> {
    let swap = swap_eps(mu_ent, k)?;
    let tele = teleport_fidelity_from_kappas(mu_ent, k, gain)?;
    let ci = coherent_information(mu_ent, k)?;
    let rate = qkd_rate(xi, mu_qkd, k)?;
    Ok(ProtocolMetrics {
        eps: swap.eps,
        eps_opt: swap.eps_opt,
        log_negativity: swap.log_negativity,
        fidelity: tele.fidelity,
        fidelity_opt: tele.fidelity_opt,
        coherent_info: ci.i_c,
        key_distill_bound: ci.i_c,
        qkd_rate: rate.rate,
        qkd_mutual_info: rate.mutual_info,
        qkd_holevo: rate.holevo,
        qkd_rate_opt_bound: qkd_rate_opt_bound(k)?,
        recon_efficiency: xi,
        teleport_gain: gain,
    })
}

/// Metrics in the correlated-additive environment through the kappa limit
/// (`kappa = n(1-c)`, `kappa' = n(1+c')`).
pub fn additive_metrics(
    xi: f64,
    mu: f64,
    add: &AdditiveEnvironmentParams,
) -> Result<ProtocolMetrics> {
    metrics_from_kappas(xi, mu, mu, &additive_kappas(add), 1.0)
}

/// Same metrics through the exact classical-noise map (`V -> V + V(n,c,c')`
/// on the transmitted modes) and the full measurement pipeline; serves as an
/// internal oracle for [`additive_metrics`].
pub fn additive_metrics_exact(
    xi: f64,
    mu: f64,
    add: &AdditiveEnvironmentParams,
) -> Result<ProtocolMetrics> {
    let convention = BellConvention::QMinusPPlus;
    let ns = build_additive_network_state(mu, add)?;
    let cond = bell_condition(&ns, convention, BellOutcome::new(0.0, 0.0))?;
    let v = cond.cm();
    let eps = ppt_min_eigenvalue(v, &[0])?;
    let k = additive_kappas(add);
    let tele = teleport_fidelity_additive(mu, add, 1.0, convention)?;
    let i_c = coherent_info_from_cm(v)?;
    let rate = qkd_rate_from_cm(xi, v)?;
    Ok(ProtocolMetrics {
        eps,
        eps_opt: (k.kappa * k.kappa_prime).sqrt(),
        log_negativity: (-eps.log2()).max(0.0),
        fidelity: tele.fidelity,
        fidelity_opt: tele.fidelity_opt,
        coherent_info: i_c,
        key_distill_bound: i_c,
        qkd_rate: rate.rate,
        qkd_mutual_info: rate.mutual_info,
        qkd_holevo: rate.holevo,
        qkd_rate_opt_bound: qkd_rate_opt_bound(&k)?,
        recon_efficiency: xi,
        teleport_gain: 1.0,
    })
}

/// Full evaluation of one environment point: classification, environmental
/// correlations, entanglement structure and (when the environment is
/// separable) the protocol metrics.
#[derive(Debug, Clone)]
pub struct PointEvaluation {
    pub classification: EnvClassification,
    /// Environmental mutual information; absent for unphysical points and
    /// for the additive limit (where it diverges).
    pub mutual_info: Option<f64>,
    /// Absent for unphysical points.
    pub structure: Option<EntanglementStructure>,
    /// Absent unless the environment is physical and separable.
    pub metrics: Option<ProtocolMetrics>,
}

/// Kappas as seen through the configured Bell detection: the alternate
/// convention mirrors the correlation plane through the origin.
fn effective_kappas(env: &EnvironmentParams, convention: BellConvention) -> Result<KappaPair> {
    match convention {
        BellConvention::QMinusPPlus => Ok(kappas(env)),
        BellConvention::QPlusPMinus => {
            let mirrored =
                EnvironmentParams::new(env.tau(), env.omega(), -env.g(), -env.g_prime())?;
            Ok(kappas(&mirrored))
        }
    }
}

pub fn evaluate_thermal_point(
    env: &EnvironmentParams,
    mu_ent: f64,
    mu_qkd: f64,
    xi: f64,
    convention: BellConvention,
) -> Result<PointEvaluation> {
    let classification = classify(env);
    if !classification.physical {
        return Ok(PointEvaluation {
            classification,
            mutual_info: None,
            structure: None,
            metrics: None,
        });
    }
    let mutual_info = Some(env_mutual_info(env.omega(), env.g(), env.g_prime())?);
    let ns = build_network_state(mu_ent, env)?;
    let structure = Some(entanglement_structure(&ns)?);
    let metrics = if classification.separable {
        let k = effective_kappas(env, convention)?;
        Some(metrics_from_kappas(xi, mu_ent, mu_qkd, &k, 1.0)?)
    } else {
        None
    };
    Ok(PointEvaluation {
        classification,
        mutual_info,
        structure,
        metrics,
    })
}

pub fn evaluate_additive_point(
    add: &AdditiveEnvironmentParams,
    mu_ent: f64,
    mu_qkd: f64,
    xi: f64,
    convention: BellConvention,
) -> Result<PointEvaluation> {
    let classification = EnvClassification {
        physical: true,
        separable: true,
        entanglement_breaking: add.entanglement_breaking(),
    };
    let ns = build_additive_network_state(mu_ent, add)?;
    let structure = Some(entanglement_structure(&ns)?);
    let k = match convention {
        BellConvention::QMinusPPlus => additive_kappas(add),
        BellConvention::QPlusPMinus => additive_kappas(&AdditiveEnvironmentParams::new(
            add.n(),
            -add.c(),
            -add.c_prime(),
        )?),
    };
    let metrics = Some(metrics_from_kappas(xi, mu_ent, mu_qkd, &k, 1.0)?);
    Ok(PointEvaluation {
        classification,
        mutual_info: None,
        structure,
        metrics,
    })
}
