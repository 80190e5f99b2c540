use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::MapModel;
use crate::mc::{par_samples, stream, uniform_point};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationEstimate {
    pub n: usize,
    /// `<phi . psi o f^n> - <phi><psi o f^n>`.
    pub covariance: f64,
    /// `|covariance|` divided by the sample sup norms of `phi` and `psi`.
    pub normalized: f64,
    pub stderr: f64,
}

/// Covariance of `phi` and `psi o f^n` over independent points drawn from
/// the physical measure (uniform points pushed forward `burn_in` times).
pub fn correlation_estimate<M, F, G>(
    map: &M,
    phi: F,
    psi: G,
    n: usize,
    samples: usize,
    burn_in: usize,
    seed: u64,
) -> Result<CorrelationEstimate>
where
    M: MapModel + ?Sized,
    F: Fn(f64) -> f64 + Sync,
    G: Fn(f64) -> f64 + Sync,
{
    if samples < 2 {
        return Err(Error::InvalidParameter("correlation needs at least 2 samples".into()));
    }
    let domain = map.domain();
    let pairs = par_samples(samples, seed, stream::INITIAL, |_, rng| {
        let mut x = uniform_point(&domain, rng);
        for _ in 0..burn_in {
            x = map.eval(x);
        }
        let a = phi(x);
        for _ in 0..n {
            x = map.eval(x);
        }
        (a, psi(x))
    });
    let k = pairs.len() as f64;
    let ma = pairs.iter().map(|p| p.0).sum::<f64>() / k;
    let mb = pairs.iter().map(|p| p.1).sum::<f64>() / k;
    let terms: Vec<f64> = pairs.iter().map(|(a, b)| (a - ma) * (b - mb)).collect();
    let cov = terms.iter().sum::<f64>() / k;
    let var = terms.iter().map(|t| (t - cov).powi(2)).sum::<f64>() / (k - 1.0);
    let sup_a = pairs.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
    let sup_b = pairs.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    Ok(CorrelationEstimate {
        n,
        covariance: cov,
        normalized: normalize(cov, sup_a, sup_b),
        stderr: (var / k).sqrt(),
    })
}

fn normalize(cov: f64, sup_a: f64, sup_b: f64) -> f64 {
    if sup_a > 0.0 && sup_b > 0.0 {
        cov.abs() / (sup_a * sup_b)
    } else {
        0.0
    }
}

/// Independent long orbits used by [`correlation_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub chains: usize,
    pub length: usize,
    pub burn_in: usize,
    pub seed: u64,
}

/// Correlations at several lags from time averages along `chains` long
/// orbits; the standard error is the spread between chains.
pub fn correlation_sweep<M, F, G>(
    map: &M,
    phi: F,
    psi: G,
    ns: &[usize],
    cfg: &ChainConfig,
) -> Result<Vec<CorrelationEstimate>>
where
    M: MapModel + ?Sized,
    F: Fn(f64) -> f64 + Sync,
    G: Fn(f64) -> f64 + Sync,
{
    if cfg.chains < 2 {
        return Err(Error::InvalidParameter("need at least 2 chains".into()));
    }
    let lag_max = ns.iter().copied().max().unwrap_or(0);
    if cfg.length <= lag_max {
        return Err(Error::InvalidParameter(format!("chain length must exceed the largest lag {lag_max}")));
    }
    let domain = map.domain();
    let per_chain = par_samples(cfg.chains, cfg.seed, stream::INITIAL, |_, rng| {
        let mut x = uniform_point(&domain, rng);
        for _ in 0..cfg.burn_in {
            x = map.eval(x);
        }
        let ring_len = lag_max + 1;
        let mut ring = vec![0.0; ring_len];
        // per lag: sum phi(x_j) psi(x_{j+n}), sum phi(x_j), sum psi(x_{j+n})
        let mut acc = vec![[0.0f64; 3]; ns.len()];
        let (mut sup_a, mut sup_b) = (0.0f64, 0.0f64);
        for t in 0..cfg.length {
            let a = phi(x);
            let b = psi(x);
            sup_a = sup_a.max(a.abs());
            sup_b = sup_b.max(b.abs());
            ring[t % ring_len] = a;
            for (s, &n) in acc.iter_mut().zip(ns) {
                if t >= n {
                    let past = ring[(t - n) % ring_len];
                    s[0] += past * b;
                    s[1] += past;
                    s[2] += b;
                }
            }
            x = map.eval(x);
        }
        let covs: Vec<f64> = acc
            .iter()
            .zip(ns)
            .map(|(s, &n)| {
                let m = (cfg.length - n) as f64;
                s[0] / m - (s[1] / m) * (s[2] / m)
            })
            .collect();
        (covs, sup_a, sup_b)
    });
    let k = cfg.chains as f64;
    let sup_a = per_chain.iter().map(|c| c.1).fold(0.0, f64::max);
    let sup_b = per_chain.iter().map(|c| c.2).fold(0.0, f64::max);
    Ok(ns
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let mean = per_chain.iter().map(|c| c.0[i]).sum::<f64>() / k;
            let var = per_chain.iter().map(|c| (c.0[i] - mean).powi(2)).sum::<f64>() / (k - 1.0);
            CorrelationEstimate {
                n,
                covariance: mean,
                normalized: normalize(mean, sup_a, sup_b),
                stderr: (var / k).sqrt(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::Doubling;
    use std::f64::consts::PI;

    #[test]
    fn lag_zero_is_sample_variance() {
        let d = Doubling::new();
        let c = correlation_estimate(&d, |x| (2.0 * PI * x).cos(), |x| (2.0 * PI * x).cos(), 0, 20_000, 0, 3).unwrap();
        assert!((c.covariance - 0.5).abs() < 0.02);
        assert!(c.normalized > 0.0);
    }

    #[test]
    fn doubling_fourier_modes_decorrelate() {
        let d = Doubling::new();
        for n in 1..5 {
            let c = correlation_estimate(&d, |x| (2.0 * PI * x).cos(), |x| (2.0 * PI * x).cos(), n, 20_000, 0, 5)
                .unwrap();
            assert!(c.covariance.abs() < 4.0 * c.stderr, "{c:?}");
        }
    }
}
