use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Circle,
    Interval,
}

/// Phase space of a one-dimensional map: a circle `[lower, upper)` with the
/// endpoints identified, or a closed interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub kind: DomainKind,
    pub lower: f64,
    pub upper: f64,
}

impl Domain {
    pub fn new(kind: DomainKind, lower: f64, upper: f64) -> Result<Self> {
        if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "domain bounds must satisfy lower < upper, got [{lower}, {upper}]"
            )));
        }
        Ok(Domain { kind, lower, upper })
    }

    pub fn circle(lower: f64, upper: f64) -> Self {
        Self::new(DomainKind::Circle, lower, upper).expect("valid circle bounds")
    }

    pub fn interval(lower: f64, upper: f64) -> Self {
        Self::new(DomainKind::Interval, lower, upper).expect("valid interval bounds")
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    #[inline]
    pub fn is_circle(&self) -> bool {
        self.kind == DomainKind::Circle
    }

    /// Reduces a position into the domain. Circle values wrap modulo the
    /// period into `[lower, upper)`; interval values are returned unchanged.
    #[inline]
    pub fn reduce(&self, x: f64) -> f64 {
        match self.kind {
            DomainKind::Interval => x,
            DomainKind::Circle => {
                if x >= self.lower && x < self.upper {
                    return x;
                }
                let len = self.length();
                let r = (x - self.lower).rem_euclid(len) + self.lower;
                // rem_euclid can round up to exactly `len`
                if r >= self.upper {
                    self.lower
                } else {
                    r
                }
            }
        }
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }

    /// Metric on the domain: wraparound distance on circles, `|x - y|` on
    /// intervals.
    #[inline]
    pub fn dist(&self, x: f64, y: f64) -> f64 {
        let d = (x - y).abs();
        match self.kind {
            DomainKind::Interval => d,
            DomainKind::Circle => {
                let len = self.length();
                let d = d.rem_euclid(len);
                d.min(len - d)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_reduction_wraps() {
        let d = Domain::circle(0.0, 1.0);
        assert_eq!(d.reduce(1.25), 0.25);
        assert_eq!(d.reduce(-0.25), 0.75);
        assert_eq!(d.reduce(1.0), 0.0);
        let s = Domain::circle(-1.0, 1.0);
        assert!((s.reduce(1.5) - (-0.5)).abs() < 1e-15);
    }

    #[test]
    fn wraparound_distance() {
        let d = Domain::circle(0.0, 1.0);
        assert!((d.dist(0.05, 0.95) - 0.1).abs() < 1e-12);
        let i = Domain::interval(0.0, 1.0);
        assert!((i.dist(0.05, 0.95) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn rejects_empty_domain() {
        assert!(Domain::new(DomainKind::Interval, 1.0, 1.0).is_err());
    }
}
