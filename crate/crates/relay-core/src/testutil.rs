//! Deterministic samplers for property tests and the acceptance suite.
//!
//! A tiny self-contained generator keeps random draws bit-identical across
//! platforms and runs, so frozen expected values stay meaningful.

use crate::environment::{classify, EnvironmentParams};
use crate::gaussian::CovarianceMatrix;

/// SplitMix64 generator (Steele, Lea & Flood's finalizer).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Rejection-sample a physical, separable environment with
/// `tau in [0.2, 0.95]` and `omega in [1.05, 25]`.
pub fn sample_separable_env(rng: &mut SplitMix64) -> EnvironmentParams {
    loop {
        let tau = rng.range(0.2, 0.95);
        let omega = rng.range(1.05, 25.0);
        let g = rng.range(-(omega - 1.0), omega - 1.0);
        let gp = rng.range(-(omega - 1.0), omega - 1.0);
        let env = EnvironmentParams::new(tau, omega, g, gp).expect("ranges are valid");
        let c = classify(&env);
        if c.physical && c.separable {
            return env;
        }
    }
}

/// Random physical covariance matrix: a tensor of thermal modes passed
/// through a few random beamsplitters (a symplectic network, so the result
/// stays physical by construction).
pub fn sample_cm(rng: &mut SplitMix64, n_modes: usize) -> CovarianceMatrix {
    let mut v = CovarianceMatrix::thermal(rng.range(1.0, 4.0)).expect("valid thermal");
    for _ in 1..n_modes {
        let t = CovarianceMatrix::thermal(rng.range(1.0, 4.0)).expect("valid thermal");
        v = v.tensor(&t);
    }
    if n_modes >= 2 {
        for _ in 0..(2 * n_modes) {
            let i = (rng.next_u64() as usize) % n_modes;
            let mut j = (rng.next_u64() as usize) % n_modes;
            if i == j {
                j = (j + 1) % n_modes;
            }
            let tau = rng.range(0.05, 0.95);
            v = v.apply_beamsplitter(i, j, tau).expect("valid beamsplitter");
        }
    }
    v
}
