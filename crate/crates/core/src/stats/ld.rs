use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::MapModel;
use crate::mc::{par_samples, sample_rng, stream, uniform_point};

/// Law of the initial points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureMode {
    /// Uniform on the domain.
    Lebesgue,
    /// Uniform points pushed forward `burn_in` times.
    Physical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdConfig {
    pub eps_dev: f64,
    pub samples: usize,
    pub mode: MeasureMode,
    pub burn_in: usize,
    /// Length of the single orbit giving the reference mean; defaults to
    /// `10 * max(n) * samples`, capped at `REFERENCE_CAP`.
    pub reference_len: Option<usize>,
    pub seed: u64,
}

pub const REFERENCE_CAP: usize = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LdEstimate {
    pub n: usize,
    /// Fraction of samples whose `n`-step average misses the reference mean
    /// by more than `eps_dev`.
    pub value: f64,
    /// Binomial standard error.
    pub stderr: f64,
    pub reference_mean: f64,
    /// Samples dropped after reaching the critical set.
    pub dropped: usize,
}

/// Birkhoff average of `phi` over one orbit of length `len` after `burn_in`
/// steps from a uniform point.
pub fn reference_mean<M, F>(map: &M, phi: &F, len: usize, burn_in: usize, seed: u64) -> f64
where
    M: MapModel + ?Sized,
    F: Fn(f64) -> f64,
{
    let mut rng = sample_rng(seed, stream::REFERENCE);
    let mut x = uniform_point(&map.domain(), &mut rng);
    for _ in 0..burn_in {
        x = map.eval(x);
    }
    let mut sum = 0.0;
    for _ in 0..len {
        sum += phi(x);
        x = map.eval(x);
    }
    sum / len.max(1) as f64
}

/// Large-deviation fractions for each `n` in `ns`; every sample contributes
/// one orbit whose prefixes give all the averages.
pub fn ld_curve<M, F>(map: &M, phi: F, ns: &[usize], cfg: &LdConfig) -> Result<Vec<LdEstimate>>
where
    M: MapModel + ?Sized,
    F: Fn(f64) -> f64 + Sync,
{
    if !(cfg.eps_dev > 0.0) {
        return Err(Error::InvalidParameter("eps_dev must be positive".into()));
    }
    if ns.is_empty() || ns.iter().any(|&n| n == 0) || cfg.samples == 0 {
        return Err(Error::InvalidParameter("need samples >= 1 and every n >= 1".into()));
    }
    let n_max = *ns.iter().max().unwrap();
    let ref_len = cfg
        .reference_len
        .unwrap_or_else(|| (10 * n_max).saturating_mul(cfg.samples).min(REFERENCE_CAP))
        .max(10 * n_max);
    let mean = reference_mean(map, &phi, ref_len, cfg.burn_in, cfg.seed);
    let domain = map.domain();
    let has_critical = !map.critical_points().is_empty();
    let burn = match cfg.mode {
        MeasureMode::Lebesgue => 0,
        MeasureMode::Physical => cfg.burn_in,
    };
    let rows = par_samples(cfg.samples, cfg.seed, stream::INITIAL, |_, rng| -> Option<Vec<bool>> {
        let mut x = uniform_point(&domain, rng);
        for _ in 0..burn {
            x = map.eval(x);
        }
        let mut hits = vec![false; ns.len()];
        let mut sum = 0.0;
        for j in 1..=n_max {
            if has_critical && map.deriv(x).is_err() {
                return None;
            }
            sum += phi(x);
            x = map.eval(x);
            for (k, &n) in ns.iter().enumerate() {
                if n == j {
                    hits[k] = (sum / n as f64 - mean).abs() > cfg.eps_dev;
                }
            }
        }
        Some(hits)
    });
    let dropped = rows.iter().filter(|r| r.is_none()).count();
    let kept: Vec<Vec<bool>> = rows.into_iter().flatten().collect();
    let total = kept.len().max(1) as f64;
    Ok(ns
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let p = kept.iter().filter(|h| h[k]).count() as f64 / total;
            LdEstimate { n, value: p, stderr: (p * (1.0 - p) / total).sqrt(), reference_mean: mean, dropped }
        })
        .collect())
}

pub fn ld_estimate<M, F>(map: &M, phi: F, n: usize, cfg: &LdConfig) -> Result<LdEstimate>
where
    M: MapModel + ?Sized,
    F: Fn(f64) -> f64 + Sync,
{
    Ok(ld_curve(map, phi, &[n], cfg)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::Doubling;

    fn cfg() -> LdConfig {
        LdConfig { eps_dev: 1e-3, samples: 200, mode: MeasureMode::Lebesgue, burn_in: 0, reference_len: None, seed: 4 }
    }

    #[test]
    fn constant_and_doubling_observables_never_deviate() {
        let d = Doubling::new();
        assert_eq!(ld_estimate(&d, |_| 0.3, 20, &cfg()).unwrap().value, 0.0);
        let e = ld_estimate(&d, |x| d.raw_deriv(x).ln(), 20, &cfg()).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.stderr, 0.0);
    }
}
