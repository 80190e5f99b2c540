use serde::Serialize;

use super::{detect_random_hyperbolic_times, random_orbit, AdaptedPerturbation, NoiseSequence};
use crate::error::Result;
use crate::hyperbolic::{adapted_hyperbolic_time, first_hyperbolic_time};
use crate::mc::{par_samples, sample_rng, stream, uniform_point};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PreservationConfig {
    pub samples: usize,
    pub trials: usize,
    /// Only points with `h(x) <= h_max` are kept.
    pub h_max: usize,
    /// Relaxed rate for the check that `H(x)` survives as a hyperbolic time.
    pub sigma_hat: f64,
    /// Candidate draws per sample before giving up on it.
    pub max_attempts: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantsEcho {
    pub xi: f64,
    pub eta: f64,
    pub omega: f64,
    pub delta1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub x: f64,
    pub h: usize,
    pub adapted: usize,
    pub fails_a: usize,
    pub fails_b: usize,
    pub fails_c: usize,
    /// Largest `deviation / bound` over trials and `j <= H(x)`.
    pub worst_ratio: f64,
    /// Smallest `bound - deviation` over trials and `j <= H(x)`.
    pub worst_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreservationReport {
    pub samples: usize,
    pub trials: usize,
    /// Fraction of trials where `H(x)` is a `(sigma_hat, delta)` random hyperbolic time.
    pub pass_a: f64,
    /// Fraction of trials whose first random hyperbolic time at `sigma` is `h(x)`.
    pub pass_b: f64,
    /// Fraction of trials respecting the shadowing bound for every `j <= H(x)`.
    pub pass_c: f64,
    /// Smallest `bound - deviation`; negative values are violations.
    pub worst_shadow_margin: f64,
    pub worst_shadow_ratio: f64,
    pub epsilon: f64,
    pub constants: ConstantsEcho,
    /// Samples for which no point with `h <= h_max` was found.
    pub skipped: usize,
    pub points: Vec<PointRecord>,
}

/// Runs random orbits from sampled points and checks that hyperbolic times
/// and the shadowing bound survive the adapted noise.
pub fn preservation_experiment(
    pert: &AdaptedPerturbation<'_>,
    cfg: &PreservationConfig,
) -> Result<PreservationReport> {
    let map = pert.map;
    let params = pert.params;
    let c = pert.constants;
    let records = par_samples(cfg.samples, cfg.seed, stream::INITIAL, |i, rng| -> Result<Option<PointRecord>> {
        let mut found = None;
        for _ in 0..cfg.max_attempts.max(1) {
            let x = uniform_point(&map.domain(), rng);
            if let Some(h) = first_hyperbolic_time(map, x, &params, pert.horizon).value() {
                if h <= cfg.h_max {
                    found = Some((x, h));
                    break;
                }
            }
        }
        let Some((x, h)) = found else { return Ok(None) };
        let adapted =
            adapted_hyperbolic_time(map, x, &params, pert.depth, pert.horizon, pert.node_budget)?.value;
        let len = h.max(adapted);
        let mut rec = PointRecord {
            x,
            h,
            adapted,
            fails_a: 0,
            fails_b: 0,
            fails_c: 0,
            worst_ratio: 0.0,
            worst_margin: f64::INFINITY,
        };
        for k in 0..cfg.trials {
            let mut nrng = sample_rng(cfg.seed, stream::NOISE + (i * cfg.trials + k) as u64);
            let noise = NoiseSequence::from_rng(pert.epsilon, len, &mut nrng);
            let r = random_orbit(pert, x, &noise, len)?;
            let relaxed = detect_random_hyperbolic_times(&r, &params, cfg.sigma_hat)?;
            if !relaxed.contains(adapted) {
                rec.fails_a += 1;
            }
            let strict = detect_random_hyperbolic_times(&r, &params, params.sigma)?;
            if strict.first != Some(h) {
                rec.fails_b += 1;
            }
            let mut ok = true;
            for (j, &d) in r.deviations.iter().enumerate().take(adapted + 1) {
                let bound = c.shadowing_bound(adapted, j);
                rec.worst_margin = rec.worst_margin.min(bound - d);
                rec.worst_ratio = rec.worst_ratio.max(d / bound);
                if d > bound {
                    ok = false;
                }
            }
            if !ok {
                rec.fails_c += 1;
            }
        }
        Ok(Some(rec))
    });

    let mut points = Vec::new();
    let mut skipped = 0;
    for r in records {
        match r? {
            Some(p) => points.push(p),
            None => skipped += 1,
        }
    }
    let total = (points.len() * cfg.trials) as f64;
    let frac = |fails: usize| if total == 0.0 { 1.0 } else { 1.0 - fails as f64 / total };
    let worst_ratio = points.iter().map(|p| p.worst_ratio).fold(0.0, f64::max);
    let worst_margin = points.iter().map(|p| p.worst_margin).fold(f64::INFINITY, f64::min);
    Ok(PreservationReport {
        samples: points.len(),
        trials: cfg.trials,
        pass_a: frac(points.iter().map(|p| p.fails_a).sum()),
        pass_b: frac(points.iter().map(|p| p.fails_b).sum()),
        pass_c: frac(points.iter().map(|p| p.fails_c).sum()),
        worst_shadow_margin: if worst_margin.is_finite() { worst_margin } else { 0.0 },
        worst_shadow_ratio: worst_ratio,
        epsilon: pert.epsilon,
        constants: ConstantsEcho { xi: c.xi, eta: c.eta, omega: c.omega, delta1: c.delta1 },
        skipped,
        points,
    })
}
