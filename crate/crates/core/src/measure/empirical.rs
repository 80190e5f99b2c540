use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::{Error, Result};

/// Raw bin counts; merging is exact integer addition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(bins: usize) -> Self {
        Histogram { counts: vec![0; bins] }
    }

    #[inline]
    pub fn add(&mut self, domain: &Domain, x: f64) {
        let m = self.counts.len();
        let i = ((x - domain.lower) / domain.length() * m as f64).floor();
        let i = if i < 0.0 { 0 } else { (i as usize).min(m - 1) };
        self.counts[i] += 1;
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// A probability measure given by weights on `m` equal bins of the domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    pub domain: Domain,
    pub weights: Vec<f64>,
}

impl EmpiricalMeasure {
    pub fn from_weights(domain: Domain, weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidParameter("an empirical measure needs at least 2 bins".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidParameter("weights must be finite and non-negative".into()));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidParameter("weights sum to zero".into()));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(EmpiricalMeasure { domain, weights })
    }

    pub fn from_histogram(domain: Domain, h: &Histogram) -> Result<Self> {
        let total = h.total();
        if total == 0 {
            return Err(Error::InvalidParameter("empty histogram".into()));
        }
        if h.counts.len() < 2 {
            return Err(Error::InvalidParameter("an empirical measure needs at least 2 bins".into()));
        }
        let weights = h.counts.iter().map(|&c| c as f64 / total as f64).collect();
        Ok(EmpiricalMeasure { domain, weights })
    }

    /// Normalised Lebesgue measure at this resolution.
    pub fn uniform(domain: Domain, bins: usize) -> Result<Self> {
        Self::from_weights(domain, vec![1.0; bins])
    }

    pub fn bins(&self) -> usize {
        self.weights.len()
    }

    pub fn bin_width(&self) -> f64 {
        self.domain.length() / self.bins() as f64
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        self.domain.lower + (i as f64 + 0.5) * self.bin_width()
    }

    /// `sum_i phi(c_i) w_i` over bin centres.
    pub fn integrate<F: Fn(f64) -> f64>(&self, phi: F) -> f64 {
        self.weights.iter().enumerate().map(|(i, w)| w * phi(self.bin_center(i))).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("bin_center,weight\n");
        for (i, w) in self.weights.iter().enumerate() {
            s.push_str(&format!("{},{}\n", self.bin_center(i), w));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_normalises() {
        let d = Domain::circle(0.0, 1.0);
        let mut h = Histogram::new(10);
        for k in 0..1000 {
            h.add(&d, k as f64 / 1000.0);
        }
        h.add(&d, 1.0);
        let m = EmpiricalMeasure::from_histogram(d, &h).unwrap();
        assert!((m.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(h.counts[9], 101);
        assert!(m.to_csv().starts_with("bin_center,weight\n0.05,"));
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let d = Domain::interval(0.0, 1.0);
        assert!(EmpiricalMeasure::from_weights(d, vec![1.0]).is_err());
        assert!(EmpiricalMeasure::from_weights(d, vec![0.0, 0.0]).is_err());
        assert!(EmpiricalMeasure::from_weights(d, vec![-1.0, 2.0]).is_err());
    }
}
