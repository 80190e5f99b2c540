//! One-dimensional map models.
//!
//! Every engine in the crate consumes a [`MapModel`]: a map on a circle or an
//! interval together with its closed-form derivative, its critical set and a
//! partition of the domain into maximal monotone branches.

mod config;
mod custom;
mod doubling;
mod intermittent;
mod preimage;
mod prv;
mod quadratic;

pub use config::{build_map, list_families, MapConfig};
pub use custom::CustomMap;
pub use doubling::{Doubling, DOUBLING_EXACT_STEPS};
pub use intermittent::Intermittent;
pub use preimage::{preimages, DEFAULT_PREIMAGE_TOL};
pub use prv::{prv_critical_points, prv_x_hat, Prv, PrvParams};
pub use quadratic::Quadratic;

use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::{Error, Result};

/// Constants `(B, beta)` of the power-law bound
/// `(1/B) d(x,C)^beta <= |Df(x)| <= B d(x,C)^-beta` near the critical set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonDegeneracy {
    #[serde(rename = "B")]
    pub big_b: f64,
    pub beta: f64,
}

impl NonDegeneracy {
    pub fn new(big_b: f64, beta: f64) -> Result<Self> {
        if !(big_b > 1.0) || !(beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "non-degeneracy requires B > 1 and beta > 0, got B = {big_b}, beta = {beta}"
            )));
        }
        Ok(NonDegeneracy { big_b, beta })
    }
}

/// A one-dimensional map with derivative, critical set and monotone branches.
///
/// `branch_endpoints` always starts at `domain.lower` and ends at
/// `domain.upper`; consecutive endpoints delimit a branch on which
/// [`MapModel::branch_lift`] is continuous and strictly monotone.
pub trait MapModel: Send + Sync {
    fn name(&self) -> &str;

    fn domain(&self) -> Domain;

    fn params(&self) -> Vec<(String, f64)>;

    /// The branch formula at `x` before reduction into the domain.
    fn lift(&self, x: f64) -> f64;

    /// Closed-form derivative. May return zero or a non-finite value on the
    /// critical set; use [`MapModel::deriv`] for the guarded version.
    fn raw_deriv(&self, x: f64) -> f64;

    fn critical_points(&self) -> &[f64];

    fn branch_endpoints(&self) -> &[f64];

    fn nondegeneracy(&self) -> Option<NonDegeneracy>;

    /// Continuous extension of the formula of branch `branch` to its closed
    /// endpoints. Maps whose lift jumps at a branch endpoint override this.
    fn branch_lift(&self, branch: usize, x: f64) -> f64 {
        let _ = branch;
        self.lift(x)
    }

    fn eval(&self, x: f64) -> f64 {
        self.domain().reduce(self.lift(x))
    }

    fn tol_crit(&self) -> f64 {
        1e-12 * self.domain().length()
    }

    /// `d(x, C)`, or `None` when the critical set is empty.
    fn dist_to_critical(&self, x: f64) -> Option<f64> {
        nearest_distance(&self.domain(), self.critical_points(), x)
    }

    fn deriv(&self, x: f64) -> Result<f64> {
        if let Some(d) = self.dist_to_critical(x) {
            if d < self.tol_crit() {
                return Err(Error::CriticalPoint { x, dist: d });
            }
        }
        let df = self.raw_deriv(x);
        if df == 0.0 || !df.is_finite() {
            return Err(Error::CriticalPoint { x, dist: 0.0 });
        }
        Ok(df)
    }

    /// The delta-truncated distance: `d(x,C)` when it is below `delta`,
    /// otherwise 1. Identically 1 for an empty critical set.
    fn truncated_dist(&self, x: f64, delta: f64) -> f64 {
        match self.dist_to_critical(x) {
            Some(d) if d < delta => d,
            _ => 1.0,
        }
    }

    fn branch_count(&self) -> usize {
        self.branch_endpoints().len().saturating_sub(1)
    }
}

/// Distance from `x` to the nearest point of the sorted list `points`.
pub(crate) fn nearest_distance(domain: &Domain, points: &[f64], x: f64) -> Option<f64> {
    if points.is_empty() {
        return None;
    }
    let idx = points.partition_point(|&c| c < x);
    let mut best = f64::INFINITY;
    for i in [idx.wrapping_sub(1), idx] {
        if let Some(&c) = points.get(i) {
            best = best.min(domain.dist(x, c));
        }
    }
    if domain.is_circle() {
        // wraparound neighbours
        best = best
            .min(domain.dist(x, points[0]))
            .min(domain.dist(x, points[points.len() - 1]));
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_distance_definition() {
        let q = Quadratic::new(2.0).unwrap();
        assert!((q.truncated_dist(0.05, 0.1) - 0.05).abs() < 1e-15);
        assert_eq!(q.truncated_dist(0.3, 0.1), 1.0);
        let d = Doubling::new();
        for x in [0.0, 0.1, 0.73] {
            assert_eq!(d.truncated_dist(x, 0.1), 1.0);
        }
    }

    #[test]
    fn nearest_distance_wraps_on_circle() {
        let dom = Domain::circle(0.0, 1.0);
        let pts = [0.05, 0.5];
        let d = nearest_distance(&dom, &pts, 0.97).unwrap();
        assert!((d - 0.08).abs() < 1e-12);
    }
}
