//! Covariance matrices in `(q1, p1, q2, p2, ...)` ordering, vacuum = identity.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::audit;

/// Relative symmetry tolerance for accepting an input matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Uncertainty-principle tolerance: symplectic eigenvalues may sit this far
/// below 1 and still count as physical (rounding, not violation).
pub const PHYSICALITY_TOL: f64 = 1e-9;
/// Scale factor for the eigenvalue-accuracy allowance at large matrix norms.
const EIG_ERR_FACTOR: f64 = 16.0;

/// Symplectic spectrum of a physical covariance matrix.
///
/// Values are clamped to `>= 1` (anything inside the physicality tolerance is
/// rounding) and stored in nondecreasing order, one entry per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticEigenvalues {
    values: Vec<f64>,
}

impl SymplecticEigenvalues {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }
}

/// A `2n x 2n` real symmetric covariance matrix over `n` ordered modes.
///
/// Construction validates symmetry, positive definiteness and the
/// uncertainty principle, so a value of this type is always a physical
/// Gaussian state's second-moment matrix. All transforms return new values.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n_modes: usize,
    m: DMatrix<f64>,
    /// Clamped symplectic spectrum, nondecreasing, computed at construction.
    spectrum: Vec<f64>,
}

/// Symplectic form for `n` modes: block-diagonal `[[0, 1], [-1, 0]]`.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Symplectic eigenvalues of a symmetric positive-definite matrix, raw
/// (no clamping), nondecreasing. Also returns the matrix scale (largest
/// absolute entry), which sets the achievable eigenvalue accuracy.
///
/// Route: Cholesky `V = L L^T`, then the singular values of the antisymmetric
/// `L^T Omega L` are the symplectic eigenvalues, each twice. This keeps the
/// absolute error at `O(eps * ||V||)` rather than `O(eps * ||V||^2)` of the
/// squared-matrix route, which matters for the small eigenvalues of strongly
/// squeezed states.
pub(crate) fn raw_symplectic_values(m: &DMatrix<f64>) -> Result<(Vec<f64>, f64)> {
    let dim = m.nrows();
    let n_modes = dim / 2;
    let max_abs = m.iter().fold(0.0f64, |a, x| a.max(x.abs()));

    let chol = match m.clone().cholesky() {
        Some(c) => c,
        None => {
            // Numerically singular but possibly still PD: retry with a tiny
            // diagonal shift at the rounding scale of the matrix norm.
            let shift = 16.0 * f64::EPSILON * max_abs.max(1.0) * dim as f64;
            let mut shifted = m.clone();
            for i in 0..dim {
                shifted[(i, i)] += shift;
            }
            shifted.cholesky().ok_or(Error::NotPositiveDefinite)?
        }
    };
    let l = chol.l();
    let antisym = l.transpose() * symplectic_form(n_modes) * &l;

    let mut sv: Vec<f64> = antisym.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));

    // Singular values come in (nu, nu) pairs; average each pair.
    let mut values: Vec<f64> = (0..n_modes)
        .map(|k| 0.5 * (sv[2 * k] + sv[2 * k + 1]))
        .collect();
    values.reverse();
    Ok((values, max_abs))
}

/// Eigenvalue-accuracy allowance for a matrix whose largest entry is
/// `scale`, combined with the fixed physicality tolerance.
///
/// The f64 representation of a squeezed state only pins the symplectic
/// eigenvalues near 1 to about `eps * scale^(3/2)` (entry rounding is
/// amplified by the squeezing of the Williamson basis), so the resolvable
/// violation floor grows accordingly.
pub(crate) fn physicality_tolerance(scale: f64, dim: usize) -> f64 {
    let amplification = scale * (1.0 + scale.sqrt());
    PHYSICALITY_TOL.max(EIG_ERR_FACTOR * dim as f64 * f64::EPSILON * amplification)
}

impl CovarianceMatrix {
    /// Validate and wrap a raw matrix.
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        let dim = m.nrows();
        if dim == 0 || dim % 2 != 0 || m.ncols() != dim {
            return Err(Error::InvalidParameter(format!(
                "covariance matrix must be square with even dimension, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotFinite);
        }
        let max_abs = m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let mut asym = 0.0f64;
        for i in 0..dim {
            for j in (i + 1)..dim {
                asym = asym.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        if asym > SYMMETRY_TOL * max_abs.max(1.0) {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        let mut sym = m;
        for i in 0..dim {
            for j in (i + 1)..dim {
                let v = 0.5 * (sym[(i, j)] + sym[(j, i)]);
                sym[(i, j)] = v;
                sym[(j, i)] = v;
            }
        }

        let (raw, scale) = raw_symplectic_values(&sym)?;
        let tol = physicality_tolerance(scale, dim);
        let nu_min_raw = raw[0];
        if nu_min_raw < 1.0 - tol {
            return Err(Error::Unphysical { nu_min: nu_min_raw });
        }
        audit::note(audit::CmAudit {
            nu_min_raw,
            scale,
            tolerance: tol,
        });
        let spectrum = raw.into_iter().map(|v| v.max(1.0)).collect();
        Ok(Self {
            n_modes: dim / 2,
            m: sym,
            spectrum,
        })
    }

    /// Vacuum state of `n` modes (identity matrix).
    pub fn vacuum(n_modes: usize) -> Self {
        Self::from_matrix(DMatrix::identity(2 * n_modes, 2 * n_modes))
            .expect("identity is a valid CM")
    }

    /// Single-mode thermal state with variance `omega >= 1`.
    pub fn thermal(omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega >= 1.0 - PHYSICALITY_TOL) {
            return Err(Error::InvalidParameter(format!(
                "thermal variance must be >= 1, got {omega}"
            )));
        }
        Self::from_matrix(DMatrix::from_diagonal_element(2, 2, omega))
    }

    /// Two-mode squeezed vacuum (EPR state) with variance `mu >= 1`:
    /// diagonal blocks `mu I`, off-diagonal `sqrt(mu^2 - 1) Z`, `Z = diag(1, -1)`.
    pub fn epr(mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "EPR variance must be >= 1, got {mu}"
            )));
        }
        let c = (mu * mu - 1.0).sqrt();
        let mut m = DMatrix::zeros(4, 4);
        for k in 0..4 {
            m[(k, k)] = mu;
        }
        m[(0, 2)] = c;
        m[(2, 0)] = c;
        m[(1, 3)] = -c;
        m[(3, 1)] = -c;
        Self::from_matrix(m)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn det(&self) -> f64 {
        self.m.determinant()
    }

    /// Clamped symplectic spectrum (one value per mode, nondecreasing).
    pub fn symplectic_spectrum(&self) -> SymplecticEigenvalues {
        SymplecticEigenvalues {
            values: self.spectrum.clone(),
        }
    }

    /// Block-diagonal composition; modes of `self` first, then `other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (da, db) = (2 * self.n_modes, 2 * other.n_modes);
        let mut m = DMatrix::zeros(da + db, da + db);
        m.view_mut((0, 0), (da, da)).copy_from(&self.m);
        m.view_mut((da, da), (db, db)).copy_from(&other.m);
        Self::from_matrix(m).expect("tensor of valid CMs is valid")
    }

    /// Discard the listed modes; the kept modes preserve their relative order.
    pub fn trace_out(&self, drop: &[usize]) -> Result<Self> {
        for &d in drop {
            if d >= self.n_modes {
                return Err(Error::ModeOutOfRange {
                    index: d,
                    n_modes: self.n_modes,
                });
            }
        }
        let keep: Vec<usize> = (0..self.n_modes).filter(|k| !drop.contains(k)).collect();
        if keep.is_empty() {
            return Err(Error::InvalidParameter(
                "cannot trace out every mode".into(),
            ));
        }
        self.keep_modes(&keep)
    }

    /// Principal submatrix on `keep` (in the given order).
    pub(crate) fn keep_modes(&self, keep: &[usize]) -> Result<Self> {
        let rows: Vec<usize> = keep.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        let dim = rows.len();
        let mut m = DMatrix::zeros(dim, dim);
        for (i, &ri) in rows.iter().enumerate() {
            for (j, &rj) in rows.iter().enumerate() {
                m[(i, j)] = self.m[(ri, rj)];
            }
        }
        Self::from_matrix(m)
    }

    /// Reorder modes: output mode `k` is input mode `perm[k]`.
    pub fn permute_modes(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n_modes];
        if perm.len() != self.n_modes {
            return Err(Error::InvalidParameter(format!(
                "permutation length {} != {} modes",
                perm.len(),
                self.n_modes
            )));
        }
        for &p in perm {
            if p >= self.n_modes || seen[p] {
                return Err(Error::InvalidParameter(
                    "mode permutation must visit each mode exactly once".into(),
                ));
            }
            seen[p] = true;
        }
        self.keep_modes(perm)
    }

    /// Mix modes `i` and `j` on a beamsplitter of transmissivity `tau`:
    /// `x_i -> sqrt(tau) x_i + sqrt(1-tau) x_j`,
    /// `x_j -> -sqrt(1-tau) x_i + sqrt(tau) x_j` for both quadratures.
    pub fn apply_beamsplitter(&self, i: usize, j: usize, tau: f64) -> Result<Self> {
        if i == j {
            return Err(Error::InvalidParameter(
                "beamsplitter needs two distinct modes".into(),
            ));
        }
        for &k in &[i, j] {
            if k >= self.n_modes {
                return Err(Error::ModeOutOfRange {
                    index: k,
                    n_modes: self.n_modes,
                });
            }
        }
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "transmissivity must lie in (0, 1], got {tau}"
            )));
        }
        let (t, r) = (tau.sqrt(), (1.0 - tau).sqrt());
        let mut s = DMatrix::identity(2 * self.n_modes, 2 * self.n_modes);
        for off in 0..2 {
            let (qi, qj) = (2 * i + off, 2 * j + off);
            s[(qi, qi)] = t;
            s[(qi, qj)] = r;
            s[(qj, qi)] = -r;
            s[(qj, qj)] = t;
        }
        let m = &s * &self.m * s.transpose();
        Self::from_matrix(m)
    }
}
