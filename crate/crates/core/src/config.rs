//! Numerical tolerances shared by every module.
//!
//! Acceptance checks and solvers read their thresholds from here so that a
//! single record governs what "equal", "optimal" and "active" mean.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative slack under which a polytope face or an ℓ₁ coordinate counts
    /// as active when building a subdifferential.
    pub active_rel: f64,
    /// Looser activity slack used when measuring optimality residuals near kinks.
    pub residual_active_rel: f64,
    /// Floor on |det T| for linear maps.
    pub det_floor: f64,
    /// Relative cutoff on singular values when computing affine spans.
    pub rank_rel: f64,
    /// Frank–Wolfe gap at which nearest-point iterations stop.
    pub hull_gap: f64,
    pub hull_max_iter: usize,
    /// Target on the certified optimality gap of the cutting-plane solver.
    pub value_tol: f64,
    /// Residual tolerance on the aggregated subgradient.
    pub residual_tol: f64,
    pub solver_max_iter: usize,
    /// Verdict slack for intuitiveness checks.
    pub verdict_tol: f64,
    /// Absolute slack when bisecting or golden-sectioning support functions.
    pub support_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            active_rel: 1e-10,
            residual_active_rel: 1e-7,
            det_floor: 1e-10,
            rank_rel: 1e-9,
            hull_gap: 1e-11,
            hull_max_iter: 10_000,
            value_tol: 1e-10,
            residual_tol: 1e-7,
            solver_max_iter: 20_000,
            verdict_tol: 1e-6,
            support_tol: 1e-13,
        }
    }
}
