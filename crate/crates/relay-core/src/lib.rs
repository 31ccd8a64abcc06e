//! Gaussian-state simulation of a continuous-variable quantum relay.
//!
//! The crate is organised in three layers:
//!
//! - [`gaussian`]: convention-fixed covariance-matrix algebra (composition,
//!   symplectic transforms, Gaussian measurements, entropies, entanglement
//!   measures). Quadrature ordering is `(q1, p1, q2, p2, ...)` and the vacuum
//!   covariance matrix is the identity, so thermal variances and EPR
//!   variances are expressed in shot-noise units.
//! - [`environment`]: the correlated two-mode thermal environment, its
//!   physicality/separability classification, the entanglement-breaking
//!   threshold and the correlated-additive limit.
//! - [`protocols`]: the relay pipeline (pre-measurement four-mode network,
//!   Bell detection) and the figures of merit of the five protocols it
//!   supports (swapping, teleportation, distillation, ideal key distillation,
//!   practical QKD).
//!
//! All operations are pure functions on immutable values and can be called
//! concurrently without shared state.

pub mod environment;
pub mod error;
pub mod gaussian;
pub mod protocols;
pub mod testutil;

pub use error::{Error, Result};
