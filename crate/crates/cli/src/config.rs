use std::path::Path;

use nue_core::maps::MapConfig;
use nue_core::stats::MeasureMode;
use serde::{Deserialize, Serialize};

use crate::error::{config_error, RunError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Orbit,
    Hyptimes,
    Adapted,
    Preservation,
    Tails,
    Stationary,
    Stability,
    Ld,
    Corr,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Orbit => "orbit",
            ExperimentKind::Hyptimes => "hyptimes",
            ExperimentKind::Adapted => "adapted",
            ExperimentKind::Preservation => "preservation",
            ExperimentKind::Tails => "tails",
            ExperimentKind::Stationary => "stationary",
            ExperimentKind::Stability => "stability",
            ExperimentKind::Ld => "ld",
            ExperimentKind::Corr => "corr",
        }
    }
}

/// Observables selectable from a config.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// `x`
    Identity,
    /// `log|Df(x)|`
    LogDeriv,
    /// `cos(2 pi (x - lower) / length)`
    Cos,
}

/// Overrides of the calibrated hyperbolic constants.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    /// Preimage depth of the adapted-time evaluator.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Horizon for first hyperbolic times.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    /// Cells of the adapted-time memo along random orbits; 0 evaluates at
    /// every point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_hat: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chains: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub batches: Option<usize>,
    /// Orbit length, burn-in and sample count of the unperturbed reference
    /// in stability runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_burn_in: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_samples: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ns: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_dev: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observable: Option<Observable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<MeasureMode>,
    /// Expansion rate for tail sets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Exponent for the L^p tail check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_max: Option<usize>,
}

/// A single experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub map: MapConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyp: Option<HypSection>,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub mc: McSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

fn or<T>(slot: &mut Option<T>, value: T) {
    if slot.is_none() {
        *slot = Some(value);
    }
}

fn powers_of_two(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|k| 1usize << k).collect()
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, RunError> {
        serde_json::from_str(text).map_err(|e| RunError::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Fills every default that does not depend on calibration.
    pub fn apply_defaults(&mut self) -> Result<(), RunError> {
        self.map = self.map.resolved().map_err(config_error)?;
        or(&mut self.out, format!("out/{}", self.experiment.name()));
        let (mc, noise, an) = (&mut self.mc, &mut self.noise, &mut self.analysis);
        match self.experiment {
            ExperimentKind::Orbit => {
                or(&mut mc.n, 100);
            }
            ExperimentKind::Hyptimes => {
                or(&mut mc.samples, 1000);
                or(&mut noise.horizon, 1000);
            }
            ExperimentKind::Adapted => {
                or(&mut mc.samples, 200);
                or(&mut noise.depth, 8);
                or(&mut noise.horizon, 1000);
            }
            ExperimentKind::Preservation => {
                or(&mut mc.samples, 200);
                or(&mut mc.trials, 50);
                or(&mut noise.depth, 8);
                or(&mut noise.horizon, 1000);
                or(&mut an.h_max, 50);
            }
            ExperimentKind::Tails => {
                or(&mut mc.samples, 10_000);
                or(&mut mc.n, 256);
                or(&mut an.ns, powers_of_two(0, 6));
                or(&mut an.p, 3.5);
            }
            ExperimentKind::Stationary | ExperimentKind::Stability => {
                or(&mut mc.n, 100_000);
                or(&mut mc.samples, 1000);
                or(&mut mc.bins, 512);
                or(&mut mc.burn_in, 1000);
                or(&mut noise.depth, 8);
                or(&mut noise.horizon, 1000);
                or(&mut noise.cells, 4096);
                if self.experiment == ExperimentKind::Stability {
                    or(&mut mc.batches, 10);
                    or(&mut mc.reference_n, mc.n.unwrap());
                    or(&mut mc.reference_burn_in, mc.burn_in.unwrap());
                    or(&mut mc.reference_samples, mc.samples.unwrap());
                }
            }
            ExperimentKind::Ld => {
                or(&mut mc.samples, 20_000);
                or(&mut mc.burn_in, 1000);
                or(&mut an.ns, powers_of_two(5, 10));
                or(&mut an.eps_dev, 0.1);
                or(&mut an.observable, Observable::LogDeriv);
                or(&mut an.mode, MeasureMode::Physical);
            }
            ExperimentKind::Corr => {
                or(&mut mc.chains, 8);
                or(&mut mc.n, 10_000_000);
                or(&mut mc.burn_in, 1000);
                or(&mut an.ns, powers_of_two(3, 8));
                or(&mut an.observable, Observable::Identity);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = r#"{"experiment":"orbit","map":{"family":"doubling"},"colour":1}"#;
        assert!(matches!(ExperimentConfig::from_json(bad), Err(RunError::Config(_))));
        let bad_mc = r#"{"experiment":"orbit","map":{"family":"doubling"},"mc":{"steps":3}}"#;
        assert!(ExperimentConfig::from_json(bad_mc).is_err());
    }

    #[test]
    fn defaults_are_idempotent() {
        let mut c = ExperimentConfig::from_json(r#"{"experiment":"ld","map":{"family":"intermittent","params":{"alpha":0.5}}}"#)
            .unwrap();
        c.apply_defaults().unwrap();
        let once = c.clone();
        c.apply_defaults().unwrap();
        assert_eq!(c, once);
        assert_eq!(c.analysis.ns.as_deref(), Some(&[32, 64, 128, 256, 512, 1024][..]));
    }
}
