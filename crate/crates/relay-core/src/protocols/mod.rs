//! The relay pipeline and the five protocol figures of merit.

mod bell;
mod distill;
mod metrics;
mod network;
mod qkd;
mod structure;
mod swap;
mod teleport;

pub use bell::{bell_condition, bell_condition_full, BellConditioned, BellConvention, BellOutcome};
pub use distill::{coherent_info_from_cm, coherent_information, CoherentInfo};
pub use metrics::{
    additive_metrics, additive_metrics_exact, evaluate_additive_point, evaluate_thermal_point,
    metrics_from_kappas, PointEvaluation, ProtocolMetrics,
};
pub use network::{build_additive_network_state, build_network_state, NetworkState, SourceParams};
pub use qkd::{qkd_rate, qkd_rate_from_cm, qkd_rate_opt_bound, QkdRate, RateBound};
pub use structure::{entanglement_structure, EntanglementStructure, SplitCheck};
pub use swap::{swap_conditional_cm, swap_eps, SwapResult};
pub use teleport::{
    teleport_fidelity, teleport_fidelity_additive, teleport_fidelity_from_kappas,
    teleport_fidelity_opt, TeleportFidelity,
};
