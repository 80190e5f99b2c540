use super::EmpiricalMeasure;
use crate::error::{Error, Result};

/// Wasserstein-1 distance between two histograms on the same bins.
///
/// On an interval this is `sum |F_i - G_i| * width`; on a circle the CDF
/// difference is first shifted by the constant minimising its L1 norm (a
/// median of the differences).
pub fn wasserstein1(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure) -> Result<f64> {
    if mu.bins() != nu.bins() {
        return Err(Error::BinMismatch(format!("{} bins vs {} bins", mu.bins(), nu.bins())));
    }
    if mu.domain != nu.domain {
        return Err(Error::BinMismatch(format!("domains {:?} and {:?} differ", mu.domain, nu.domain)));
    }
    let mut diff = Vec::with_capacity(mu.bins());
    let (mut f, mut g) = (0.0, 0.0);
    for (a, b) in mu.weights.iter().zip(&nu.weights) {
        f += a;
        g += b;
        diff.push(f - g);
    }
    let shift = if mu.domain.is_circle() { median(&diff) } else { 0.0 };
    Ok(diff.iter().map(|d| (d - shift).abs()).sum::<f64>() * mu.bin_width())
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;

    fn point_mass(d: Domain, bins: usize, i: usize) -> EmpiricalMeasure {
        let mut w = vec![0.0; bins];
        w[i] = 1.0;
        EmpiricalMeasure::from_weights(d, w).unwrap()
    }

    #[test]
    fn interval_examples() {
        let d = Domain::interval(0.0, 1.0);
        let a = point_mass(d, 100, 0);
        let b = point_mass(d, 100, 50);
        assert!((wasserstein1(&a, &b).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(wasserstein1(&a, &a).unwrap(), 0.0);
        let u = EmpiricalMeasure::uniform(d, 100).unwrap();
        let mut w = vec![1.0; 50];
        w.extend(vec![0.0; 50]);
        let half = EmpiricalMeasure::from_weights(d, w).unwrap();
        assert!((wasserstein1(&u, &half).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn circle_wraps() {
        let d = Domain::circle(0.0, 1.0);
        let a = point_mass(d, 100, 0);
        let b = point_mass(d, 100, 90);
        assert!((wasserstein1(&a, &b).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn mismatch_is_an_error() {
        let d = Domain::interval(0.0, 1.0);
        let a = EmpiricalMeasure::uniform(d, 10).unwrap();
        let b = EmpiricalMeasure::uniform(d, 12).unwrap();
        assert!(matches!(wasserstein1(&a, &b), Err(Error::BinMismatch(_))));
        let c = EmpiricalMeasure::uniform(Domain::circle(0.0, 1.0), 10).unwrap();
        assert!(matches!(wasserstein1(&a, &c), Err(Error::BinMismatch(_))));
    }
}
