//! Gaussian states: first moments plus a covariance matrix.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

use super::cm::CovarianceMatrix;

/// A Gaussian state: quadrature mean vector and covariance matrix.
///
/// The coherent amplitude convention is `mean = (2 Re a, 2 Im a)` per mode,
/// matching a vacuum covariance of identity.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cm: CovarianceMatrix,
}

impl GaussianState {
    pub fn new(mean: DVector<f64>, cm: CovarianceMatrix) -> Result<Self> {
        if mean.len() != 2 * cm.n_modes() {
            return Err(Error::InvalidParameter(format!(
                "mean length {} does not match {} modes",
                mean.len(),
                cm.n_modes()
            )));
        }
        if mean.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotFinite);
        }
        Ok(Self { mean, cm })
    }

    pub fn zero_mean(cm: CovarianceMatrix) -> Self {
        let mean = DVector::zeros(2 * cm.n_modes());
        Self { mean, cm }
    }

    /// Single-mode coherent state `|a>` with `a = re + i im`.
    pub fn coherent(re: f64, im: f64) -> Self {
        Self {
            mean: DVector::from_vec(vec![2.0 * re, 2.0 * im]),
            cm: CovarianceMatrix::vacuum(1),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.cm.n_modes()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cm(&self) -> &CovarianceMatrix {
        &self.cm
    }

    /// Beamsplitter on modes `i`, `j` (see
    /// [`CovarianceMatrix::apply_beamsplitter`]); transforms the mean the
    /// same way as the quadrature operators.
    pub fn apply_beamsplitter(&self, i: usize, j: usize, tau: f64) -> Result<Self> {
        let cm = self.cm.apply_beamsplitter(i, j, tau)?;
        let (t, r) = (tau.sqrt(), (1.0 - tau).sqrt());
        let mut mean = self.mean.clone();
        for off in 0..2 {
            let (qi, qj) = (2 * i + off, 2 * j + off);
            let (a, b) = (mean[qi], mean[qj]);
            mean[qi] = t * a + r * b;
            mean[qj] = -r * a + t * b;
        }
        Self::new(mean, cm)
    }

    /// Overlap of a one-mode state with the coherent state whose mean is
    /// `target_mean`: `F = 2 exp(-delta^T (V+I)^{-1} delta / 2) / sqrt(det(V+I))`.
    pub fn coherent_fidelity(&self, target_mean: [f64; 2]) -> Result<f64> {
        if self.n_modes() != 1 {
            return Err(Error::InvalidParameter(format!(
                "coherent fidelity needs a one-mode state, got {} modes",
                self.n_modes()
            )));
        }
        let v = self.cm.matrix();
        let s = DMatrix::from_row_slice(
            2,
            2,
            &[v[(0, 0)] + 1.0, v[(0, 1)], v[(1, 0)], v[(1, 1)] + 1.0],
        );
        let det = s[(0, 0)] * s[(1, 1)] - s[(0, 1)] * s[(1, 0)];
        let inv = DMatrix::from_row_slice(
            2,
            2,
            &[
                s[(1, 1)] / det,
                -s[(0, 1)] / det,
                -s[(1, 0)] / det,
                s[(0, 0)] / det,
            ],
        );
        let delta = DVector::from_vec(vec![
            self.mean[0] - target_mean[0],
            self.mean[1] - target_mean[1],
        ]);
        let quad = (delta.transpose() * inv * delta)[(0, 0)];
        Ok(2.0 * (-0.5 * quad).exp() / det.sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fidelity_of_identical_coherent_states() {
        let s = GaussianState::coherent(0.7, -0.2);
        assert_relative_eq!(s.coherent_fidelity([1.4, -0.4]).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_of_displaced_vacuum() {
        // |<a|b>|^2 = exp(-|a-b|^2); mean offset (2, 0) is |a-b| = 1.
        let s = GaussianState::zero_mean(CovarianceMatrix::vacuum(1));
        let f = s.coherent_fidelity([2.0, 0.0]).unwrap();
        assert_relative_eq!(f, (-1.0f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn fidelity_of_thermal_state_with_vacuum() {
        let s = GaussianState::zero_mean(CovarianceMatrix::thermal(3.0).unwrap());
        assert_relative_eq!(s.coherent_fidelity([0.0, 0.0]).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_rejects_multimode() {
        let s = GaussianState::zero_mean(CovarianceMatrix::vacuum(2));
        assert!(s.coherent_fidelity([0.0, 0.0]).is_err());
    }

    #[test]
    fn mean_length_checked() {
        let cm = CovarianceMatrix::vacuum(2);
        assert!(GaussianState::new(DVector::zeros(3), cm).is_err());
    }
}
