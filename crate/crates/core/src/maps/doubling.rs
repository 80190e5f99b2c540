use super::{MapModel, NonDegeneracy};
use crate::domain::Domain;

/// `x -> 2x mod 1` on the unit circle.
///
/// Binary floating point shifts one mantissa bit out per step, so a
/// deterministic orbit lands on the fixed point 0 after at most 53 steps.
/// Physical-measure runs for this map should pool many short orbits.
#[derive(Debug, Clone)]
pub struct Doubling {
    branches: [f64; 3],
    nondeg: NonDegeneracy,
}

/// Longest deterministic orbit of the doubling map that still carries at
/// least 9 random mantissa bits.
pub const DOUBLING_EXACT_STEPS: usize = 44;

impl Doubling {
    pub fn new() -> Self {
        Doubling {
            branches: [0.0, 0.5, 1.0],
            // no critical points: d(x, C) is read as 1 and B only has to
            // dominate |Df| = 2
            nondeg: NonDegeneracy { big_b: 2.5, beta: 1.0 },
        }
    }

    pub fn with_nondegeneracy(mut self, nd: NonDegeneracy) -> Self {
        self.nondeg = nd;
        self
    }
}

impl Default for Doubling {
    fn default() -> Self {
        Self::new()
    }
}

impl MapModel for Doubling {
    fn name(&self) -> &str {
        "doubling"
    }

    fn domain(&self) -> Domain {
        Domain::circle(0.0, 1.0)
    }

    fn params(&self) -> Vec<(String, f64)> {
        Vec::new()
    }

    #[inline]
    fn lift(&self, x: f64) -> f64 {
        2.0 * x
    }

    #[inline]
    fn raw_deriv(&self, _x: f64) -> f64 {
        2.0
    }

    fn critical_points(&self) -> &[f64] {
        &[]
    }

    fn branch_endpoints(&self) -> &[f64] {
        &self.branches
    }

    fn nondegeneracy(&self) -> Option<NonDegeneracy> {
        Some(self.nondeg)
    }
}
