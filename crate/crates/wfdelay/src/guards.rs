//! Singularity-guard constants and numerical tolerances shared by the
//! delay solver, validation and the step construction.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Guard constants `(d, v̄)` plus the numerical knobs of the construction.
///
/// `d` is the minimum admissible separation between a particle and the
/// delayed position of its partner; `v_bar` caps speeds strictly below 1.
/// Construction halts (with a stop reason) as soon as either bound is hit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GuardParams {
    /// Minimum admissible separation.
    pub d: f64,
    /// Speed cap, strictly inside (0, 1).
    pub v_bar: f64,
    /// Order up to which the compatibility conditions of the initial data
    /// are enforced and checked.
    pub n_compat: usize,
    /// Order of derivative matching certified at segment joins.
    pub n_smooth: usize,
    /// Relative tolerance for join derivative mismatches.
    pub join_tol: f64,
    /// Polynomial degree of constructed segments.
    pub step_degree: usize,
}

impl Default for GuardParams {
    fn default() -> Self {
        GuardParams {
            d: 1e-3,
            v_bar: 0.99,
            n_compat: 3,
            n_smooth: 3,
            join_tol: 1e-6,
            step_degree: 16,
        }
    }
}

impl GuardParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.d.is_finite() && self.d > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "guard separation d must be positive, got {}",
                self.d
            )));
        }
        if !(self.v_bar > 0.0 && self.v_bar < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "speed cap v_bar must lie in (0, 1), got {}",
                self.v_bar
            )));
        }
        if self.step_degree < 3 {
            return Err(Error::InvalidArgument(
                "step degree must be at least 3".into(),
            ));
        }
        if !(self.join_tol.is_finite() && self.join_tol > 0.0) {
            return Err(Error::InvalidArgument(
                "join tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}
