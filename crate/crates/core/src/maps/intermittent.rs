use super::{MapModel, NonDegeneracy};
use crate::domain::Domain;
use crate::error::{Error, Result};

/// Pomeau–Manneville map on the circle `[0,1)`:
/// `x + 2^a x^(1+a)` on `[0, 1/2)` and `x - 2^a (1-x)^(1+a)` on `[1/2, 1]`.
/// Neutral fixed point at 0 with `Df(0) = 1`.
#[derive(Debug, Clone)]
pub struct Intermittent {
    alpha: f64,
    branches: [f64; 3],
    nondeg: NonDegeneracy,
}

impl Intermittent {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "intermittent map needs alpha > 0, got {alpha}"
            )));
        }
        Ok(Intermittent {
            alpha,
            branches: [0.0, 0.5, 1.0],
            // C is empty, so B only has to dominate max |Df| = 2 + alpha
            nondeg: NonDegeneracy { big_b: 2.0 + alpha.max(1.0), beta: 1.0 },
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn with_nondegeneracy(mut self, nd: NonDegeneracy) -> Self {
        self.nondeg = nd;
        self
    }

    // 2^a u^(1+a) is evaluated as u (2u)^a, which is exact at u = 1/2
    #[inline]
    fn left(&self, x: f64) -> f64 {
        x + x * (2.0 * x).powf(self.alpha)
    }

    #[inline]
    fn right(&self, x: f64) -> f64 {
        let u = 1.0 - x;
        x - u * (2.0 * u).powf(self.alpha)
    }
}

impl MapModel for Intermittent {
    fn name(&self) -> &str {
        "intermittent"
    }

    fn domain(&self) -> Domain {
        Domain::circle(0.0, 1.0)
    }

    fn params(&self) -> Vec<(String, f64)> {
        vec![("alpha".into(), self.alpha)]
    }

    #[inline]
    fn lift(&self, x: f64) -> f64 {
        if x < 0.5 {
            self.left(x)
        } else {
            self.right(x)
        }
    }

    #[inline]
    fn raw_deriv(&self, x: f64) -> f64 {
        let u = if x < 0.5 { x } else { 1.0 - x };
        1.0 + (1.0 + self.alpha) * (2.0 * u.max(0.0)).powf(self.alpha)
    }

    fn branch_lift(&self, branch: usize, x: f64) -> f64 {
        if branch == 0 {
            self.left(x)
        } else {
            self.right(x)
        }
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
