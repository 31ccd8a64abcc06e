//! Opt-in physicality audit of every covariance matrix constructed on the
//! current thread. Used by the acceptance suite to assert that no pipeline
//! ever produces a state below the uncertainty limit.

use std::cell::RefCell;

/// One record per successfully constructed [`super::CovarianceMatrix`].
#[derive(Debug, Clone, Copy)]
pub struct CmAudit {
    /// Smallest symplectic eigenvalue before clamping.
    pub nu_min_raw: f64,
    /// Largest absolute matrix entry.
    pub scale: f64,
    /// Physicality tolerance that was applied at this scale.
    pub tolerance: f64,
}

thread_local! {
    static CAPTURE: RefCell<Option<Vec<CmAudit>>> = const { RefCell::new(None) };
}

/// Run `f` while recording every covariance matrix constructed on this
/// thread; returns the closure result together with the audit trail.
pub fn capture<R>(f: impl FnOnce() -> R) -> (R, Vec<CmAudit>) {
    CAPTURE.with(|c| *c.borrow_mut() = Some(Vec::new()));
    let out = f();
    let records = CAPTURE.with(|c| c.borrow_mut().take()).unwrap_or_default();
    (out, records)
}

pub(crate) fn note(record: CmAudit) {
    CAPTURE.with(|c| {
        if let Some(v) = c.borrow_mut().as_mut() {
            v.push(record);
        }
    });
}
