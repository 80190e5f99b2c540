use serde::{Deserialize, Serialize};

use super::estimate::physical_batches;
use super::{stationary_measure, wasserstein1, EmpiricalMeasure, SamplingConfig};
use crate::error::{Error, Result};
use crate::noise::AdaptedPerturbation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityConfig {
    /// Strictly descending noise amplitudes, each at most `epsilon0`.
    pub epsilons: Vec<f64>,
    pub sampling: SamplingConfig,
    /// Sampling of the unperturbed reference; defaults to `sampling`.
    pub reference: Option<SamplingConfig>,
    /// Number of sample blocks used for the Monte Carlo error.
    pub batches: usize,
}

/// `epsilon -> W1(mu_epsilon, mu_0)` at fixed resolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityCurve {
    pub epsilons: Vec<f64>,
    pub distances: Vec<f64>,
    /// Typical W1 between two independent reference estimates of full size.
    pub mc_error: f64,
    pub dropped: usize,
    #[serde(skip)]
    pub reference: Option<EmpiricalMeasure>,
}

impl StabilityCurve {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("epsilon,w1,mc_error\n");
        for (e, d) in self.epsilons.iter().zip(&self.distances) {
            s.push_str(&format!("{e},{d},{}\n", self.mc_error));
        }
        s
    }

    /// Whether each distance exceeds its predecessor by at most `slack`.
    pub fn non_increasing_within(&self, slack: f64) -> bool {
        self.distances.windows(2).all(|w| w[1] <= w[0] + slack)
    }
}

pub fn stability_curve(pert: &AdaptedPerturbation<'_>, cfg: &StabilityConfig) -> Result<StabilityCurve> {
    if cfg.epsilons.is_empty() {
        return Err(Error::InvalidParameter("no noise amplitudes given".into()));
    }
    if cfg.epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("noise amplitudes must be strictly descending".into()));
    }
    let eps0 = pert.constants.epsilon0;
    if cfg.epsilons.iter().any(|&e| !(e > 0.0 && e <= eps0 && e <= pert.epsilon)) {
        return Err(Error::InvalidParameter(format!(
            "noise amplitudes must lie in (0, {}]",
            eps0.min(pert.epsilon)
        )));
    }
    let batches = cfg.batches.max(2);
    let reference_cfg = cfg.reference.unwrap_or(cfg.sampling);
    let reference = physical_batches(pert.map, &reference_cfg, batches)?;
    let mc_error = batch_error(&reference)?;
    let mut dropped = reference.dropped;
    let mut distances = Vec::with_capacity(cfg.epsilons.len());
    for &eps in &cfg.epsilons {
        let run = stationary_measure(pert, eps, &cfg.sampling)?;
        dropped += run.dropped;
        distances.push(wasserstein1(&run.measure, &reference.measure)?);
    }
    Ok(StabilityCurve {
        epsilons: cfg.epsilons.clone(),
        distances,
        mc_error,
        dropped,
        reference: Some(reference.measure),
    })
}

/// Mean W1 between each block and the remaining blocks, rescaled to the
/// spread expected between two independent estimates of full size.
fn batch_error(run: &super::MeasureRun) -> Result<f64> {
    let k = run.batches.len();
    let domain = run.measure.domain;
    let mut sum = 0.0;
    for b in 0..k {
        let mut rest = super::Histogram::new(run.measure.bins());
        for (c, h) in run.batches.iter().enumerate() {
            if c != b {
                rest.merge(h);
            }
        }
        let one = EmpiricalMeasure::from_histogram(domain, &run.batches[b])?;
        let others = EmpiricalMeasure::from_histogram(domain, &rest)?;
        sum += wasserstein1(&one, &others)?;
    }
    let kf = k as f64;
    Ok(sum / kf * (2.0 * (kf - 1.0)).sqrt() / kf)
}
