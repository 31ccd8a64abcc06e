//! Entropies and partial-transpose entanglement measures.

use std::f64::consts::LN_2;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::cm::{raw_symplectic_values, CovarianceMatrix, PHYSICALITY_TOL};

/// Entropic function of a symplectic eigenvalue, in bits:
/// `h(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2)`, `h(1) = 0`.
///
/// Evaluated as `v ln(1 + 1/v)/ln 2 + log2(u)` with `u = (x+1)/2`,
/// `v = (x-1)/2`, which stays accurate for x far from and close to 1.
pub fn entropy_h(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "entropy argument must be finite, got {x}"
        )));
    }
    if x < 1.0 - PHYSICALITY_TOL {
        return Err(Error::InvalidParameter(format!(
            "entropy argument must be >= 1, got {x}"
        )));
    }
    let x = x.max(1.0);
    let v = 0.5 * (x - 1.0);
    if v == 0.0 {
        return Ok(0.0);
    }
    let u = 0.5 * (x + 1.0);
    Ok(v * (1.0 / v).ln_1p() / LN_2 + u.log2())
}

/// Von Neumann entropy of a Gaussian state in bits: sum of [`entropy_h`]
/// over the symplectic spectrum.
pub fn von_neumann_entropy(v: &CovarianceMatrix) -> f64 {
    v.symplectic_spectrum()
        .values()
        .iter()
        .map(|&nu| entropy_h(nu).expect("clamped spectrum is >= 1"))
        .sum()
}

/// Smallest symplectic eigenvalue of a two-mode symmetric matrix via the
/// standard block invariants. The minimal root is computed in the
/// cancellation-free form `2 det / (delta + sqrt(delta^2 - 4 det))`.
fn two_mode_min_symplectic(m: &DMatrix<f64>) -> f64 {
    let det2 = |a, b, c, d| -> f64 { a * d - b * c };
    let det_a = det2(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let det_b = det2(m[(2, 2)], m[(2, 3)], m[(3, 2)], m[(3, 3)]);
    let det_c = det2(m[(0, 2)], m[(0, 3)], m[(1, 2)], m[(1, 3)]);
    let delta = det_a + det_b + 2.0 * det_c;
    let det_v = m.determinant();
    let disc = (delta * delta - 4.0 * det_v).max(0.0);
    let nu2 = 2.0 * det_v / (delta + disc.sqrt());
    nu2.max(0.0).sqrt()
}

/// Smallest symplectic eigenvalue after partially transposing the modes in
/// `party` (momentum sign flip, applied as a congruence).
///
/// A value `< 1` certifies NPT entanglement across `party | rest`; for
/// `1 x N` Gaussian bipartitions PPT is also sufficient, so `>= 1` certifies
/// separability of those splits. The result is not clamped.
pub fn ppt_min_eigenvalue(v: &CovarianceMatrix, party: &[usize]) -> Result<f64> {
    let n = v.n_modes();
    let mut in_party = vec![false; n];
    for &p in party {
        if p >= n {
            return Err(Error::ModeOutOfRange {
                index: p,
                n_modes: n,
            });
        }
        in_party[p] = true;
    }
    let size = in_party.iter().filter(|&&b| b).count();
    if size == 0 || size == n {
        return Err(Error::InvalidModeSubset { n_modes: n });
    }

    let mut p = DMatrix::identity(2 * n, 2 * n);
    for (k, &flip) in in_party.iter().enumerate() {
        if flip {
            p[(2 * k + 1, 2 * k + 1)] = -1.0;
        }
    }
    let pt = &p * v.matrix() * &p;

    if n == 2 {
        return Ok(two_mode_min_symplectic(&pt));
    }
    let (values, _) = raw_symplectic_values(&pt)?;
    Ok(values[0])
}

/// Logarithmic negativity across `party | rest`:
/// `N = max(0, -log2(eps))` with `eps` the smallest partially-transposed
/// symplectic eigenvalue.
pub fn log_negativity(v: &CovarianceMatrix, party: &[usize]) -> Result<f64> {
    let eps = ppt_min_eigenvalue(v, party)?;
    Ok((-eps.log2()).max(0.0))
}
