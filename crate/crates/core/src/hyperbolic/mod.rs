//! Hyperbolic times along finite orbits.

mod adapted;
mod detect;
mod first;
mod tails;
mod trace;

pub use adapted::{adapted_hyperbolic_time, AdaptedTime, DEFAULT_NODE_BUDGET};
pub use detect::{
    detect_hyperbolic_times, detect_hyperbolic_times_naive, satisfies_recurrence_sum_bound,
    HypTimeReport, IncrementalDetector,
};
pub use first::{first_hyperbolic_time, FirstTime};
pub use tails::{lp_tail_check, tail_table, LpTailCheck, TailConfig, TailTable};
pub use trace::{trace_orbit, OrbitTrace};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::NonDegeneracy;

/// The constants `(sigma, delta, b, beta, B)` governing hyperbolic-time
/// detection, with `b = min(1/2, 1/(2 beta))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicParams {
    pub sigma: f64,
    pub delta: f64,
    pub b: f64,
    pub beta: f64,
    #[serde(rename = "B")]
    pub big_b: f64,
}

impl HyperbolicParams {
    pub fn new(sigma: f64, delta: f64, beta: f64, big_b: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::InvalidParameter(format!("sigma must lie in (0,1), got {sigma}")));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidParameter(format!("delta must lie in (0,1], got {delta}")));
        }
        NonDegeneracy::new(big_b, beta)?;
        Ok(HyperbolicParams { sigma, delta, b: recurrence_exponent(beta), beta, big_b })
    }

    pub fn from_nondegeneracy(sigma: f64, delta: f64, nd: NonDegeneracy) -> Result<Self> {
        Self::new(sigma, delta, nd.beta, nd.big_b)
    }

    /// Same constants with a different contraction rate.
    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        Self::new(sigma, self.delta, self.beta, self.big_b)
    }

    #[inline]
    pub fn log_sigma(&self) -> f64 {
        self.sigma.ln()
    }
}

/// `b = min(1/2, 1/(2 beta))`.
pub fn recurrence_exponent(beta: f64) -> f64 {
    0.5f64.min(0.5 / beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_never_exceeds_half() {
        assert_eq!(recurrence_exponent(0.5), 0.5);
        assert_eq!(recurrence_exponent(1.0), 0.5);
        assert_eq!(recurrence_exponent(2.0), 0.25);
        for beta in [0.1, 0.7, 1.3, 5.0, 40.0] {
            let b = recurrence_exponent(beta);
            assert!(b <= 0.5 && b * beta <= 0.5 + 1e-15);
        }
    }

    #[test]
    fn validates_ranges() {
        assert!(HyperbolicParams::new(1.0, 0.5, 1.0, 2.0).is_err());
        assert!(HyperbolicParams::new(0.5, 0.0, 1.0, 2.0).is_err());
        assert!(HyperbolicParams::new(0.5, 0.5, 1.0, 1.0).is_err());
        assert!(HyperbolicParams::new(0.5, 1.0, 1.0, 2.0).is_ok());
    }
}
