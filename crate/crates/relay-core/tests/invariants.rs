//! Cross-module invariant sweeps.

use nalgebra::DVector;

use relay_core::environment::{
    additive_kappas, classify, eb_threshold, env_mutual_info, kappas, AdditiveEnvironmentParams,
    EnvironmentParams,
};
use relay_core::gaussian::{
    condition_on_heterodyne, condition_on_homodyne, ppt_min_eigenvalue, GaussianState, Quadrature,
};
use relay_core::protocols::{
    additive_metrics, additive_metrics_exact, build_network_state, entanglement_structure,
    metrics_from_kappas, RateBound,
};
use relay_core::testutil::{sample_cm, sample_separable_env, SplitMix64};

#[test]
fn symplectic_spectrum_invariant_under_beamsplitters() {
    let mut rng = SplitMix64::new(1);
    for _ in 0..100 {
        let n = 2 + (rng.next_u64() as usize) % 3;
        let v = sample_cm(&mut rng, n);
        let before = v.symplectic_spectrum();
        let mut w = v.clone();
        for _ in 0..4 {
            let i = (rng.next_u64() as usize) % n;
            let j = (i + 1 + (rng.next_u64() as usize) % (n - 1)) % n;
            w = w.apply_beamsplitter(i, j, rng.range(0.05, 1.0)).unwrap();
        }
        let after = w.symplectic_spectrum();
        for (a, b) in before.values().iter().zip(after.values()) {
            assert!((a - b).abs() < 1e-9, "spectrum moved: {a} vs {b}");
        }
    }
}

#[test]
fn spectrum_product_equals_determinant() {
    let mut rng = SplitMix64::new(2);
    for _ in 0..200 {
        let n = 1 + (rng.next_u64() as usize) % 4;
        let v = sample_cm(&mut rng, n);
        let prod: f64 = v
            .symplectic_spectrum()
            .values()
            .iter()
            .map(|nu| nu * nu)
            .product();
        let det = v.det();
        assert!(
            (prod - det).abs() <= 1e-8 * det.abs().max(1.0),
            "prod {prod} vs det {det}"
        );
    }
}

#[test]
fn ppt_symmetric_under_party_complement() {
    let mut rng = SplitMix64::new(3);
    for _ in 0..100 {
        let n = 3 + (rng.next_u64() as usize) % 2;
        let v = sample_cm(&mut rng, n);
        let cut = 1 + (rng.next_u64() as usize) % (n - 1);
        let party: Vec<usize> = (0..cut).collect();
        let complement: Vec<usize> = (cut..n).collect();
        let a = ppt_min_eigenvalue(&v, &party).unwrap();
        let b = ppt_min_eigenvalue(&v, &complement).unwrap();
        assert!((a - b).abs() < 1e-9, "party {a} vs complement {b}");
    }
}

#[test]
fn heterodyne_equals_beamsplit_vacuum_and_dual_homodyne() {
    let mut rng = SplitMix64::new(4);
    for _ in 0..100 {
        let v = sample_cm(&mut rng, 3);
        let mean = DVector::from_fn(6, |_, _| rng.range(-2.0, 2.0));
        let state = GaussianState::new(mean, v).unwrap();
        let mode = (rng.next_u64() as usize) % 3;
        let (u, w) = (rng.range(-1.5, 1.5), rng.range(-1.5, 1.5));

        // Heterodyne outcome matching the (q out1, p out2) readout below.
        let het = condition_on_heterodyne(
            &state,
            mode,
            (u / 2.0f64.sqrt(), -w / 2.0f64.sqrt()),
        )
        .unwrap();

        // Mix the measured mode with an appended vacuum, homodyne q on the
        // mode slot and p on the ancilla slot.
        let with_vac = GaussianState::new(
            {
                let mut m = state.mean().clone().insert_rows(6, 2, 0.0);
                m[(6, 0)] = 0.0;
                m
            },
            state.cm().tensor(&relay_core::gaussian::CovarianceMatrix::vacuum(1)),
        )
        .unwrap();
        let mixed = with_vac.apply_beamsplitter(mode, 3, 0.5).unwrap();
        let after_q = condition_on_homodyne(&mixed, mode, Quadrature::Q, u).unwrap();
        let both = condition_on_homodyne(&after_q, 2, Quadrature::P, w).unwrap();

        for i in 0..4 {
            for j in 0..4 {
                let err = (het.cm().matrix()[(i, j)] - both.cm().matrix()[(i, j)]).abs();
                assert!(err < 1e-8, "CM entry ({i},{j}) differs by {err}");
            }
            let err = (het.mean()[i] - both.mean()[i]).abs();
            assert!(err < 1e-8, "mean entry {i} differs by {err}");
        }
    }
}

#[test]
fn progressive_nesting_on_a_coarse_grid() {
    // {R>0} within {I_C>0} within {F>1/2} within {N>0} point by point.
    let (tau, omega, mu) = (0.9, 19.38, 1e6);
    let gmax = omega - 1.0;
    let steps = 21;
    let mut counts = [0usize; 4];
    for i in 0..steps {
        for j in 0..steps {
            let g = -gmax + 2.0 * gmax * i as f64 / (steps - 1) as f64;
            let gp = -gmax + 2.0 * gmax * j as f64 / (steps - 1) as f64;
            let env = EnvironmentParams::new(tau, omega, g, gp).unwrap();
            let c = classify(&env);
            if !(c.physical && c.separable) {
                continue;
            }
            let m = metrics_from_kappas(1.0, mu, mu, &kappas(&env), 1.0).unwrap();
            let swap_ok = m.log_negativity > 0.0;
            let tele_ok = m.fidelity > 0.5;
            let dist_ok = m.coherent_info > 0.0;
            let qkd_ok = m.qkd_rate > 0.0;
            if qkd_ok {
                counts[3] += 1;
                assert!(dist_ok, "QKD without distillation at ({g}, {gp})");
            }
            if dist_ok {
                counts[2] += 1;
                assert!(tele_ok, "distillation without teleportation at ({g}, {gp})");
            }
            if tele_ok {
                counts[1] += 1;
                assert!(swap_ok, "teleportation without swapping at ({g}, {gp})");
            }
            if swap_ok {
                counts[0] += 1;
            }
        }
    }
    assert!(
        counts.iter().all(|&c| c > 0),
        "all four regions nonempty: {counts:?}"
    );
}

#[test]
fn eb_persistence_no_bipartite_or_tripartite_revival() {
    let (tau, omega, mu) = (0.9, 19.38, 1e6);
    let gmax = omega - 1.0;
    let steps = 9;
    let mut separable_points = 0;
    for i in 0..steps {
        for j in 0..steps {
            let g = -gmax + 2.0 * gmax * i as f64 / (steps - 1) as f64;
            let gp = -gmax + 2.0 * gmax * j as f64 / (steps - 1) as f64;
            let env = EnvironmentParams::new(tau, omega, g, gp).unwrap();
            let c = classify(&env);
            if !(c.physical && c.separable) {
                continue;
            }
            separable_points += 1;
            let ns = build_network_state(mu, &env).unwrap();
            let s = entanglement_structure(&ns).unwrap();
            assert!(
                !s.bipartite[0].entangled && !s.bipartite[1].entangled,
                "bipartite revival at ({g}, {gp})"
            );
            assert!(!s.any_tripartite(), "tripartite revival at ({g}, {gp})");
        }
    }
    assert!(separable_points > 30);
}

#[test]
fn asymptotic_metrics_match_closed_optima() {
    // The finite-mu gap scales like eps_opt (kappa + kappa' + 1/kappa +
    // 1/kappa') / (2 mu), so the stated tolerances presume kappas in the
    // protocol-relevant window.
    let mut rng = SplitMix64::new(6);
    let mu = 1e8;
    for _ in 0..50 {
        let env = sample_separable_env(&mut rng);
        let k = kappas(&env);
        if !(0.02..=5.0).contains(&k.kappa) || !(0.02..=5.0).contains(&k.kappa_prime) {
            continue;
        }
        let m = metrics_from_kappas(1.0, mu, 100.0, &k, 1.0).unwrap();
        assert!(
            (m.eps - m.eps_opt).abs() < 1e-6,
            "eps {} vs opt {}",
            m.eps,
            m.eps_opt
        );
        assert!(
            (m.fidelity - m.fidelity_opt).abs() < 1e-3,
            "F {} vs opt {}",
            m.fidelity,
            m.fidelity_opt
        );
        let i_c_asym = -(std::f64::consts::E * m.eps_opt).log2();
        assert!(
            (m.coherent_info - i_c_asym).abs() < 1e-3,
            "I_C {} vs asymptote {}",
            m.coherent_info,
            i_c_asym
        );
    }
}

#[test]
fn additive_paths_agree_across_the_parameter_box() {
    for ni in 0..9 {
        let n = 0.5 * ni as f64;
        for &c in &[-1.0, -0.5, 0.0, 0.5, 1.0] {
            for &cp in &[-1.0, 0.0, 1.0] {
                let add = AdditiveEnvironmentParams::new(n, c, cp).unwrap();
                let a = additive_metrics(1.0, 52.0, &add).unwrap();
                let b = additive_metrics_exact(1.0, 52.0, &add).unwrap();
                for (name, x, y) in [
                    ("eps", a.eps, b.eps),
                    ("logneg", a.log_negativity, b.log_negativity),
                    ("fidelity", a.fidelity, b.fidelity),
                    ("i_c", a.coherent_info, b.coherent_info),
                    ("rate", a.qkd_rate, b.qkd_rate),
                ] {
                    assert!(
                        (x - y).abs() < 1e-6,
                        "{name} mismatch at (n={n}, c={c}, c'={cp}): {x} vs {y}"
                    );
                }
                match (a.qkd_rate_opt_bound, b.qkd_rate_opt_bound) {
                    (RateBound::Unbounded, RateBound::Unbounded) => {}
                    (RateBound::Finite(x), RateBound::Finite(y)) => {
                        assert!((x - y).abs() < 1e-6)
                    }
                    other => panic!("bound kind mismatch: {other:?}"),
                }
            }
        }
    }
}

#[test]
fn metrics_degrade_with_thermal_noise() {
    // At fixed tau, g, g' every figure of merit worsens as omega grows.
    let (tau, g, gp) = (0.9, 3.0, -3.0);
    let mut prev: Option<(f64, f64, f64, f64)> = None;
    for omega in [4.0, 6.0, 9.0, 14.0, 19.0, 24.0] {
        let env = EnvironmentParams::new(tau, omega, g, gp).unwrap();
        let m = metrics_from_kappas(1.0, 100.0, 100.0, &kappas(&env), 1.0).unwrap();
        if let Some((ln, f, ic, r)) = prev {
            assert!(m.log_negativity <= ln + 1e-12);
            assert!(m.fidelity <= f + 1e-12);
            assert!(m.coherent_info <= ic + 1e-12);
            assert!(m.qkd_rate <= r + 1e-12);
        }
        prev = Some((m.log_negativity, m.fidelity, m.coherent_info, m.qkd_rate));
    }
}

#[test]
fn metrics_symmetric_under_party_exchange() {
    // The conditional state has equal A and B blocks, so swapping parties
    // leaves every metric unchanged; spot-check via the mirrored kappas.
    let mut rng = SplitMix64::new(8);
    for _ in 0..50 {
        let env = sample_separable_env(&mut rng);
        let ns = build_network_state(20.0, &env).unwrap();
        let s = entanglement_structure(&ns).unwrap();
        assert!((s.quadripartite[0].nu_min - s.quadripartite[1].nu_min).abs() < 1e-8);
        assert!((s.quadripartite[2].nu_min - s.quadripartite[3].nu_min).abs() < 1e-8);
        assert!((s.bipartite[0].nu_min - s.bipartite[1].nu_min).abs() < 1e-8);
    }
}

#[test]
fn eb_threshold_independent_of_separable_correlations() {
    // The a|A' crossing stays at omega_EB for correlated environments.
    let tau = 0.9;
    let expect = eb_threshold(tau).unwrap();
    for (g_frac, gp_frac) in [(0.0, 0.0), (0.6, -0.6), (0.4, 0.2), (-0.5, 0.1)] {
        let crossing = bisect_a_aprime_crossing(tau, g_frac, gp_frac, 1e4);
        assert!(
            (crossing - expect).abs() < 1e-6,
            "crossing {crossing} at fractions ({g_frac}, {gp_frac})"
        );
    }
}

fn bisect_a_aprime_crossing(tau: f64, g_frac: f64, gp_frac: f64, mu: f64) -> f64 {
    let nu_at = |omega: f64| -> f64 {
        let env =
            EnvironmentParams::new(tau, omega, g_frac * (omega - 1.0), gp_frac * (omega - 1.0))
                .unwrap();
        let ns = build_network_state(mu, &env).unwrap();
        let red = ns.cm().trace_out(&[1, 3]).unwrap();
        ppt_min_eigenvalue(&red, &[0]).unwrap()
    };
    let (mut lo, mut hi) = (17.0, 21.0);
    assert!(nu_at(lo) < 1.0 && nu_at(hi) > 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if nu_at(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn mutual_info_positive_definite_on_correlated_points() {
    let mut rng = SplitMix64::new(9);
    for _ in 0..200 {
        let env = sample_separable_env(&mut rng);
        let i = env_mutual_info(env.omega(), env.g(), env.g_prime()).unwrap();
        assert!(i >= 0.0);
        if env.g().abs() + env.g_prime().abs() > 1e-3 {
            assert!(i > 0.0, "zero I at g = {}, g' = {}", env.g(), env.g_prime());
        }
    }
    assert_eq!(env_mutual_info(5.0, 0.0, 0.0).unwrap(), 0.0);
}

#[test]
fn additive_kappa_pair_reaches_thermal_limit_metrics() {
    // Thermal environment approaching the additive limit reproduces the
    // additive metrics.
    let (n, c, cp) = (1.2, 0.8, -0.3);
    let add = AdditiveEnvironmentParams::new(n, c, cp).unwrap();
    let add_k = additive_kappas(&add);
    let delta = 1e-7;
    let omega = n / delta;
    let env =
        EnvironmentParams::new(1.0 - delta, omega, c * (omega - 1.0), cp * (omega - 1.0)).unwrap();
    let th_k = kappas(&env);
    let a = metrics_from_kappas(1.0, 52.0, 52.0, &add_k, 1.0).unwrap();
    let b = metrics_from_kappas(1.0, 52.0, 52.0, &th_k, 1.0).unwrap();
    assert!((a.eps - b.eps).abs() < 1e-5);
    assert!((a.qkd_rate - b.qkd_rate).abs() < 1e-4);
}
