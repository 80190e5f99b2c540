use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{EmpiricalMeasure, Histogram};
use crate::error::{Error, Result};
use crate::maps::MapModel;
use crate::mc::{sample_rng, stream, uniform_point};
use crate::noise::{perturbed_step, AdaptedPerturbation};

const CHUNK: usize = 64;

/// Orbit length, pooling and resolution of a histogram estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    /// Orbit length `N`.
    pub n: usize,
    pub samples: usize,
    pub bins: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { n: 100_000, samples: 1_000, bins: 512, burn_in: 1_000, seed: 0 }
    }
}

/// A histogram estimate with its per-batch parts.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureRun {
    pub measure: EmpiricalMeasure,
    /// Orbits discarded because they reached the critical set.
    pub dropped: usize,
    /// Counts of consecutive sample blocks; they merge to `measure`.
    pub batches: Vec<Histogram>,
}

/// Pools `x_j`, `burn_in <= j < N`, over uniformly drawn `x_0`.
pub fn physical_measure<M: MapModel + ?Sized>(map: &M, cfg: &SamplingConfig) -> Result<MeasureRun> {
    run_batched(map, cfg, 1, |x, _| Ok(map.eval(x)))
}

/// Same pooling along random orbits `f_{t_j}` with `t_j` uniform on
/// `[-epsilon, epsilon]`. Initial points and the underlying uniforms are the
/// ones `physical_measure` and other amplitudes use for the same seed.
pub fn stationary_measure(
    pert: &AdaptedPerturbation<'_>,
    epsilon: f64,
    cfg: &SamplingConfig,
) -> Result<MeasureRun> {
    if !(epsilon >= 0.0 && epsilon <= pert.epsilon) {
        return Err(Error::InvalidParameter(format!(
            "epsilon {epsilon} outside [0, {}]",
            pert.epsilon
        )));
    }
    run_batched(pert.map, cfg, 1, |x, rng| perturbed_step(pert, x, epsilon * rng.gen_range(-1.0..=1.0)))
}

pub(crate) fn run_batched<M, S>(map: &M, cfg: &SamplingConfig, batches: usize, step: S) -> Result<MeasureRun>
where
    M: MapModel + ?Sized,
    S: Fn(f64, &mut ChaCha8Rng) -> Result<f64> + Sync,
{
    validate(cfg)?;
    let domain = map.domain();
    let has_critical = !map.critical_points().is_empty();
    let batches = batches.clamp(1, cfg.samples);
    let one = |i: usize, hist: &mut Histogram| -> Result<bool> {
        let mut init = sample_rng(cfg.seed, stream::INITIAL + i as u64);
        let mut noise = sample_rng(cfg.seed, stream::NOISE + i as u64);
        let mut x = uniform_point(&domain, &mut init);
        let mut local = Histogram::new(cfg.bins);
        for j in 0..cfg.n {
            if has_critical && map.deriv(x).is_err() {
                return Ok(false);
            }
            if j >= cfg.burn_in {
                local.add(&domain, x);
            }
            x = step(x, &mut noise)?;
        }
        hist.merge(&local);
        Ok(true)
    };

    let mut parts = Vec::with_capacity(batches);
    let mut dropped = 0;
    for b in 0..batches {
        let lo = b * cfg.samples / batches;
        let hi = (b + 1) * cfg.samples / batches;
        let chunks: Vec<(Histogram, usize)> = (lo..hi)
            .step_by(CHUNK)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|start| -> Result<(Histogram, usize)> {
                let mut h = Histogram::new(cfg.bins);
                let mut lost = 0;
                for i in start..(start + CHUNK).min(hi) {
                    if !one(i, &mut h)? {
                        lost += 1;
                    }
                }
                Ok((h, lost))
            })
            .collect::<Result<_>>()?;
        let mut h = Histogram::new(cfg.bins);
        for (c, lost) in chunks {
            h.merge(&c);
            dropped += lost;
        }
        parts.push(h);
    }
    let mut total = Histogram::new(cfg.bins);
    for p in &parts {
        total.merge(p);
    }
    let measure = EmpiricalMeasure::from_histogram(domain, &total)?;
    Ok(MeasureRun { measure, dropped, batches: parts })
}

fn validate(cfg: &SamplingConfig) -> Result<()> {
    if cfg.burn_in >= cfg.n {
        return Err(Error::InvalidParameter(format!("burn_in {} must be below N {}", cfg.burn_in, cfg.n)));
    }
    if cfg.samples == 0 || cfg.bins < 2 {
        return Err(Error::InvalidParameter("need samples >= 1 and bins >= 2".into()));
    }
    Ok(())
}

/// Splits a run into `batches` consecutive sample blocks.
pub(crate) fn physical_batches<M: MapModel + ?Sized>(
    map: &M,
    cfg: &SamplingConfig,
    batches: usize,
) -> Result<MeasureRun> {
    run_batched(map, cfg, batches, |x, _| Ok(map.eval(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::HyperbolicParams;
    use crate::maps::{Doubling, Intermittent, Quadratic, DOUBLING_EXACT_STEPS};
    use crate::noise::{choose_constants, HSource};

    #[test]
    fn doubling_short_orbits_are_uniform() {
        let d = Doubling::new();
        let cfg = SamplingConfig { n: DOUBLING_EXACT_STEPS, samples: 4000, bins: 16, burn_in: 0, seed: 1 };
        let run = physical_measure(&d, &cfg).unwrap();
        let points = (cfg.samples * cfg.n) as f64;
        let tol = 4.0 * (16.0 / points).sqrt();
        for w in &run.measure.weights {
            assert!((w - 1.0 / 16.0).abs() < tol, "{w}");
        }
        assert_eq!(run.dropped, 0);
    }

    #[test]
    fn zero_amplitude_matches_physical() {
        let map = Intermittent::new(0.1).unwrap();
        let p = HyperbolicParams::new(0.8, 0.5, 1.0, 3.0).unwrap();
        let c = choose_constants(&p, 0.02).unwrap();
        let pert = AdaptedPerturbation::new(&map, p, c, 0.1, 2, 50).unwrap().with_source(HSource::Constant(1));
        let cfg = SamplingConfig { n: 500, samples: 20, bins: 32, burn_in: 10, seed: 9 };
        let a = physical_measure(&map, &cfg).unwrap();
        let b = stationary_measure(&pert, 0.0, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn batches_merge_to_total() {
        let q = Quadratic::new(2.0).unwrap();
        let cfg = SamplingConfig { n: 200, samples: 30, bins: 8, burn_in: 5, seed: 2 };
        let whole = physical_measure(&q, &cfg).unwrap();
        let split = physical_batches(&q, &cfg, 10).unwrap();
        assert_eq!(whole.measure, split.measure);
        assert_eq!(split.batches.len(), 10);
    }
}
