//! Automatic choice of `(sigma, delta, gamma)` and of the perturbation
//! constants from Birkhoff statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{recurrence_exponent, HyperbolicParams};
use crate::maps::MapModel;
use crate::mc::{par_samples, stream, uniform_point};
use crate::noise::{choose_constants, AdaptedConstants};

/// Candidate truncation radii `2^-1, ..., 2^-10`.
pub const DELTA_GRID: [f64; 10] = [
    0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationConfig {
    /// Length of each test orbit.
    pub n: usize,
    pub samples: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        CalibrationConfig { n: 100_000, samples: 16, burn_in: 100, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub lyapunov: f64,
    pub lyapunov_stderr: f64,
    pub sigma: f64,
    pub delta: f64,
    pub gamma: f64,
    pub params: HyperbolicParams,
    pub constants: AdaptedConstants,
    /// `(delta, worst slow-recurrence average over test orbits)` per candidate.
    pub recurrence: Vec<(f64, f64)>,
    /// Test orbits discarded because they reached the critical set.
    pub dropped: usize,
}

struct OrbitStats {
    lyapunov: f64,
    recurrence: [f64; 10],
}

pub fn calibrate<M: MapModel + ?Sized>(map: &M, cfg: &CalibrationConfig) -> Result<Calibration> {
    if cfg.samples == 0 || cfg.n == 0 {
        return Err(Error::InvalidParameter("calibration needs samples >= 1 and n >= 1".into()));
    }
    let domain = map.domain();
    let runs = par_samples(cfg.samples, cfg.seed, stream::CALIBRATION, |_, rng| {
        let mut x = uniform_point(&domain, rng);
        for _ in 0..cfg.burn_in {
            x = map.eval(x);
        }
        let mut lyap = 0.0;
        let mut rec = [0.0; 10];
        for _ in 0..cfg.n {
            let df = map.deriv(x).ok()?;
            lyap += df.abs().ln();
            if let Some(d) = map.dist_to_critical(x) {
                for (r, &delta) in rec.iter_mut().zip(&DELTA_GRID) {
                    if d < delta {
                        *r -= d.ln();
                    }
                }
            }
            x = map.eval(x);
        }
        let n = cfg.n as f64;
        Some(OrbitStats { lyapunov: lyap / n, recurrence: rec.map(|r| r / n) })
    });
    let dropped = runs.iter().filter(|r| r.is_none()).count();
    let stats: Vec<OrbitStats> = runs.into_iter().flatten().collect();
    if stats.is_empty() {
        return Err(Error::CalibrationFailure("every test orbit reached the critical set".into()));
    }
    let k = stats.len() as f64;
    let lyapunov = stats.iter().map(|s| s.lyapunov).sum::<f64>() / k;
    let var = stats.iter().map(|s| (s.lyapunov - lyapunov).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
    let lyapunov_stderr = (var / k).sqrt();
    if !(lyapunov > 0.0) {
        return Err(Error::CalibrationFailure(format!(
            "Lyapunov estimate {lyapunov} is not positive at horizon {}",
            cfg.n
        )));
    }
    let sigma = (-lyapunov / 3.0).exp();
    let nd = map
        .nondegeneracy()
        .ok_or_else(|| Error::CalibrationFailure(format!("map {} has no (B, beta) constants", map.name())))?;
    let b = recurrence_exponent(nd.beta);
    let gamma = b * (-sigma.ln()) / 4.0;
    let recurrence: Vec<(f64, f64)> = DELTA_GRID
        .iter()
        .enumerate()
        .map(|(i, &d)| (d, stats.iter().map(|s| s.recurrence[i]).fold(0.0, f64::max)))
        .collect();
    let delta = recurrence
        .iter()
        .find(|(_, worst)| *worst < gamma)
        .map(|(d, _)| *d)
        .ok_or_else(|| {
            Error::CalibrationFailure(format!("no delta in 2^-1..2^-10 keeps slow recurrence below {gamma}"))
        })?;
    let params = HyperbolicParams::from_nondegeneracy(sigma, delta, nd)?;
    let constants = choose_constants(&params, gamma)?;
    Ok(Calibration { lyapunov, lyapunov_stderr, sigma, delta, gamma, params, constants, recurrence, dropped })
}
