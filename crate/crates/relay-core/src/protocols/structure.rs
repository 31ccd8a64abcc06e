//! Entanglement structure of the four-mode network state.
//!
//! PPT is necessary and sufficient for every split checked here (all are
//! `1 x N` Gaussian bipartitions), so each flag is a certificate in both
//! directions.

use crate::error::Result;
use crate::gaussian::ppt_min_eigenvalue;

use super::network::NetworkState;

const MODE_NAMES: [&str; 4] = ["a", "b", "A'", "B'"];

/// One bipartition test: the smallest partially-transposed symplectic
/// eigenvalue and the resulting flag (`nu_min < 1` means entangled).
#[derive(Debug, Clone, PartialEq)]
pub struct SplitCheck {
    /// Human-readable split, e.g. `a|bA'B'` or `b|aA' (drop B')`.
    pub label: String,
    pub nu_min: f64,
    pub entangled: bool,
}

fn check(nu_min: f64, label: String) -> SplitCheck {
    SplitCheck {
        label,
        nu_min,
        entangled: nu_min < 1.0,
    }
}

/// All `1 x N` entanglement flags of the `(a, b, A', B')` state.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementStructure {
    /// `1 x 3` groupings of the full four-mode state, indexed by the single
    /// party: `a`, `b`, `A'`, `B'`.
    pub quadripartite: [SplitCheck; 4],
    /// Two-mode reductions `a|A'`, `b|B'`, `a|b`.
    pub bipartite: [SplitCheck; 3],
    /// `1 x 2` splits of each three-mode reduction (12 in total).
    pub tripartite: Vec<SplitCheck>,
}

impl EntanglementStructure {
    pub fn all_quadripartite(&self) -> bool {
        self.quadripartite.iter().all(|s| s.entangled)
    }

    pub fn any_quadripartite(&self) -> bool {
        self.quadripartite.iter().any(|s| s.entangled)
    }

    pub fn any_tripartite(&self) -> bool {
        self.tripartite.iter().any(|s| s.entangled)
    }

    pub fn min_tripartite_nu(&self) -> f64 {
        self.tripartite
            .iter()
            .map(|s| s.nu_min)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Evaluate every listed split of the network state.
pub fn entanglement_structure(ns: &NetworkState) -> Result<EntanglementStructure> {
    let v = ns.cm();

    let mut quad = Vec::with_capacity(4);
    for m in 0..4 {
        let nu = ppt_min_eigenvalue(v, &[m])?;
        let rest: Vec<&str> = (0..4).filter(|&k| k != m).map(|k| MODE_NAMES[k]).collect();
        quad.push(check(nu, format!("{}|{}", MODE_NAMES[m], rest.concat())));
    }

    let mut bip = Vec::with_capacity(3);
    for (i, j) in [(0usize, 2usize), (1, 3), (0, 1)] {
        let red = v.keep_modes(&[i, j])?;
        let nu = ppt_min_eigenvalue(&red, &[0])?;
        bip.push(check(nu, format!("{}|{}", MODE_NAMES[i], MODE_NAMES[j])));
    }

    let mut tri = Vec::with_capacity(12);
    for drop in 0..4 {
        let red = v.trace_out(&[drop])?;
        let kept: Vec<usize> = (0..4).filter(|&k| k != drop).collect();
        for (pos, &one) in kept.iter().enumerate() {
            let nu = ppt_min_eigenvalue(&red, &[pos])?;
            let rest: Vec<&str> = kept
                .iter()
                .filter(|&&k| k != one)
                .map(|&k| MODE_NAMES[k])
                .collect();
            tri.push(check(
                nu,
                format!(
                    "{}|{} (drop {})",
                    MODE_NAMES[one],
                    rest.concat(),
                    MODE_NAMES[drop]
                ),
            ));
        }
    }

    Ok(EntanglementStructure {
        quadripartite: quad.try_into().expect("four groupings"),
        bipartite: bip.try_into().expect("three reductions"),
        tripartite: tri,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::EnvironmentParams;
    use crate::protocols::network::build_network_state;

    fn structure_at(g: f64, gp: f64, mu: f64) -> EntanglementStructure {
        let env = EnvironmentParams::new(0.9, 19.38, g, gp).unwrap();
        let ns = build_network_state(mu, &env).unwrap();
        entanglement_structure(&ns).unwrap()
    }

    #[test]
    fn eb_markovian_point_has_no_entanglement_at_all() {
        let s = structure_at(0.0, 0.0, 1e6);
        assert!(!s.any_quadripartite());
        assert!(!s.any_tripartite());
        assert!(s.bipartite.iter().all(|b| !b.entangled));
    }

    #[test]
    fn strong_antidiagonal_correlations_reactivate_quadripartite() {
        let s = structure_at(18.0, -18.0, 1e6);
        assert!(s.all_quadripartite());
        // Bipartite and tripartite entanglement stay broken.
        assert!(!s.any_tripartite());
        assert!(s.bipartite.iter().all(|b| !b.entangled));
    }

    #[test]
    fn remote_pair_is_product_before_conditioning() {
        // a and b are uncorrelated thermal modes of variance mu, so the
        // partially-transposed minimum is mu itself.
        let s = structure_at(10.0, -10.0, 100.0);
        let ab = &s.bipartite[2];
        assert!(ab.label == "a|b");
        assert!(!ab.entangled);
        assert!((ab.nu_min - 100.0).abs() < 1e-6, "nu = {}", ab.nu_min);
    }

    #[test]
    fn below_threshold_links_keep_bipartite_entanglement() {
        // omega < omega_EB = 19: the a|A' link is entangled for large mu.
        let env = EnvironmentParams::new(0.9, 10.0, 0.0, 0.0).unwrap();
        let ns = build_network_state(1e4, &env).unwrap();
        let s = entanglement_structure(&ns).unwrap();
        assert!(s.bipartite[0].entangled, "a|A' nu = {}", s.bipartite[0].nu_min);
        assert!(s.bipartite[1].entangled);
    }
}
