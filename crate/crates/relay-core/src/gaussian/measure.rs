//! Gaussian measurements: homodyne and heterodyne conditioning.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

use super::cm::CovarianceMatrix;
use super::state::GaussianState;

/// Pseudoinverse tolerance for the projected homodyne block.
const PINV_TOL: f64 = 1e-12;

/// Which quadrature a homodyne detector reads out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    Q,
    P,
}

/// Split a state's second moments around one measured mode:
/// `(A, B, C, kept_mean, measured_mean)` with `A` the kept block,
/// `B` the measured 2x2 block and `C` the kept-to-measured cross block.
fn partition(
    state: &GaussianState,
    mode: usize,
) -> Result<(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>, DVector<f64>, DVector<f64>)> {
    let n = state.n_modes();
    if mode >= n {
        return Err(Error::ModeOutOfRange {
            index: mode,
            n_modes: n,
        });
    }
    if n < 2 {
        return Err(Error::InvalidParameter(
            "conditioning needs at least one unmeasured mode".into(),
        ));
    }
    let v = state.cm().matrix();
    let kept_rows: Vec<usize> = (0..n)
        .filter(|&k| k != mode)
        .flat_map(|k| [2 * k, 2 * k + 1])
        .collect();
    let meas_rows = [2 * mode, 2 * mode + 1];
    let dk = kept_rows.len();

    let mut a = DMatrix::zeros(dk, dk);
    let mut b = DMatrix::zeros(2, 2);
    let mut c = DMatrix::zeros(dk, 2);
    for (i, &ri) in kept_rows.iter().enumerate() {
        for (j, &rj) in kept_rows.iter().enumerate() {
            a[(i, j)] = v[(ri, rj)];
        }
        for (j, &rj) in meas_rows.iter().enumerate() {
            c[(i, j)] = v[(ri, rj)];
        }
    }
    for (i, &ri) in meas_rows.iter().enumerate() {
        for (j, &rj) in meas_rows.iter().enumerate() {
            b[(i, j)] = v[(ri, rj)];
        }
    }
    let kept_mean = DVector::from_iterator(dk, kept_rows.iter().map(|&r| state.mean()[r]));
    let meas_mean = DVector::from_iterator(2, meas_rows.iter().map(|&r| state.mean()[r]));
    Ok((a, b, c, kept_mean, meas_mean))
}

fn symmetrized_state(m: DMatrix<f64>, mean: DVector<f64>) -> Result<GaussianState> {
    let mut m = m;
    let dim = m.nrows();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    GaussianState::new(mean, CovarianceMatrix::from_matrix(m)?)
}

/// Condition on a homodyne detection of one quadrature of `mode`.
///
/// The kept covariance is the Schur complement `A - C (Pi B Pi)^+ C^T` with
/// `Pi` the projector on the measured quadrature; the conditional mean is
/// linear in the `outcome`. The measured mode is removed from the state.
pub fn condition_on_homodyne(
    state: &GaussianState,
    mode: usize,
    quadrature: Quadrature,
    outcome: f64,
) -> Result<GaussianState> {
    let (a, b, c, kept_mean, meas_mean) = partition(state, mode)?;
    let k = match quadrature {
        Quadrature::Q => 0,
        Quadrature::P => 1,
    };
    let var = b[(k, k)];
    if var <= PINV_TOL {
        // Zero-variance quadrature: projected block pseudoinverts to zero.
        return symmetrized_state(a, kept_mean);
    }
    let col = c.column(k).into_owned();
    let m = &a - (&col * col.transpose()) / var;
    let mean = &kept_mean + &col * ((outcome - meas_mean[k]) / var);
    symmetrized_state(m, mean)
}

/// Condition on a heterodyne detection of `mode` with complex outcome
/// `re + i im`: `A - C (B + I)^{-1} C^T`, mean linear in the outcome
/// (which estimates the mode mean as `(2 re, 2 im)`).
pub fn condition_on_heterodyne(
    state: &GaussianState,
    mode: usize,
    outcome: (f64, f64),
) -> Result<GaussianState> {
    let (a, b, c, kept_mean, meas_mean) = partition(state, mode)?;
    let bi = DMatrix::from_row_slice(
        2,
        2,
        &[b[(0, 0)] + 1.0, b[(0, 1)], b[(1, 0)], b[(1, 1)] + 1.0],
    );
    let inv = bi
        .try_inverse()
        .ok_or(Error::NotPositiveDefinite)?;
    let m = &a - &c * &inv * c.transpose();
    let y = DVector::from_vec(vec![2.0 * outcome.0 - meas_mean[0], 2.0 * outcome.1 - meas_mean[1]]);
    let mean = &kept_mean + &c * &inv * y;
    symmetrized_state(m, mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn homodyne_on_epr_squeezes_remote_mode() {
        let mu = 4.0;
        let s = GaussianState::zero_mean(CovarianceMatrix::epr(mu).unwrap());
        let out = condition_on_homodyne(&s, 1, Quadrature::Q, 0.0).unwrap();
        assert_eq!(out.n_modes(), 1);
        assert_relative_eq!(out.cm().matrix()[(0, 0)], 1.0 / mu, epsilon = 1e-9);
        assert_relative_eq!(out.cm().matrix()[(1, 1)], mu, epsilon = 1e-9);
    }

    #[test]
    fn homodyne_of_product_state_leaves_partner_alone() {
        let s = GaussianState::zero_mean(CovarianceMatrix::vacuum(2));
        for quad in [Quadrature::Q, Quadrature::P] {
            for mode in 0..2 {
                let out = condition_on_homodyne(&s, mode, quad, 1.3).unwrap();
                assert_relative_eq!(out.cm().matrix()[(0, 0)], 1.0, epsilon = 1e-12);
                assert_relative_eq!(out.cm().matrix()[(1, 1)], 1.0, epsilon = 1e-12);
                assert_eq!(out.mean()[0], 0.0);
            }
        }
    }

    #[test]
    fn homodyne_mean_linear_in_outcome() {
        let s = GaussianState::zero_mean(CovarianceMatrix::epr(3.0).unwrap());
        let a = condition_on_homodyne(&s, 1, Quadrature::Q, 1.0).unwrap();
        let b = condition_on_homodyne(&s, 1, Quadrature::Q, 2.0).unwrap();
        assert_relative_eq!(b.mean()[0], 2.0 * a.mean()[0], epsilon = 1e-12);
        assert_eq!(a.mean()[1], 0.0);
        // Covariance is outcome-independent.
        assert_eq!(a.cm().matrix(), b.cm().matrix());
    }

    #[test]
    fn heterodyne_on_epr_prepares_coherent_state() {
        let s = GaussianState::zero_mean(CovarianceMatrix::epr(6.0).unwrap());
        let out = condition_on_heterodyne(&s, 1, (0.0, 0.0)).unwrap();
        assert_relative_eq!(out.cm().matrix()[(0, 0)], 1.0, epsilon = 1e-9);
        assert_relative_eq!(out.cm().matrix()[(1, 1)], 1.0, epsilon = 1e-9);
        assert_relative_eq!(out.cm().matrix()[(0, 1)], 0.0, epsilon = 1e-9);
    }

    #[test]
    fn heterodyne_of_correlated_thermal_pair() {
        // [[2I, diag(1,-1)], [diag(1,-1), 2I]] -> (5/3) I on the kept mode.
        let mut m = DMatrix::identity(4, 4) * 2.0;
        m[(0, 2)] = 1.0;
        m[(2, 0)] = 1.0;
        m[(1, 3)] = -1.0;
        m[(3, 1)] = -1.0;
        let s = GaussianState::zero_mean(CovarianceMatrix::from_matrix(m).unwrap());
        let out = condition_on_heterodyne(&s, 1, (0.4, -0.1)).unwrap();
        assert_relative_eq!(out.cm().matrix()[(0, 0)], 5.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(out.cm().matrix()[(1, 1)], 5.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn measurement_rejects_bad_mode() {
        let s = GaussianState::zero_mean(CovarianceMatrix::vacuum(2));
        assert!(condition_on_homodyne(&s, 2, Quadrature::Q, 0.0).is_err());
        assert!(condition_on_heterodyne(&s, 9, (0.0, 0.0)).is_err());
    }
}
