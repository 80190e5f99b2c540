use super::{MapModel, NonDegeneracy};
use crate::domain::Domain;
use crate::error::{Error, Result};

/// `x -> 1 - a x^2` on the interval `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    a: f64,
    critical: [f64; 1],
    branches: [f64; 3],
    nondeg: NonDegeneracy,
}

impl Quadratic {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "quadratic map needs 0 < a <= 2, got {a}"
            )));
        }
        // |Df| = 2a d(x,0): beta = 1 works with B >= max(2a, 1/(2a))
        let big_b = 1.1 * (2.0 * a).max(0.5 / a);
        Ok(Quadratic {
            a,
            critical: [0.0],
            branches: [-1.0, 0.0, 1.0],
            nondeg: NonDegeneracy { big_b, beta: 1.0 },
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn with_nondegeneracy(mut self, nd: NonDegeneracy) -> Self {
        self.nondeg = nd;
        self
    }
}

impl MapModel for Quadratic {
    fn name(&self) -> &str {
        "quadratic"
    }

    fn domain(&self) -> Domain {
        Domain::interval(-1.0, 1.0)
    }

    fn params(&self) -> Vec<(String, f64)> {
        vec![("a".into(), self.a)]
    }

    #[inline]
    fn lift(&self, x: f64) -> f64 {
        1.0 - self.a * x * x
    }

    #[inline]
    fn raw_deriv(&self, x: f64) -> f64 {
        -2.0 * self.a * x
    }

    fn critical_points(&self) -> &[f64] {
        &self.critical
    }

    fn branch_endpoints(&self) -> &[f64] {
        &self.branches
    }

    fn nondegeneracy(&self) -> Option<NonDegeneracy> {
        Some(self.nondeg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn derivative_vanishes_at_zero() {
        let q = Quadratic::new(2.0).unwrap();
        assert!(matches!(q.deriv(0.0), Err(Error::CriticalPoint { .. })));
        assert_eq!(q.deriv(0.5).unwrap(), -2.0);
    }

    #[test]
    fn chebyshev_parameter_maps_onto_interval() {
        let q = Quadratic::new(2.0).unwrap();
        assert_eq!(q.eval(0.0), 1.0);
        assert_eq!(q.eval(1.0), -1.0);
        assert_eq!(q.eval(-1.0), -1.0);
    }
}
