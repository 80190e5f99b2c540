use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::prv::PrvParams;
use super::{Doubling, Intermittent, MapModel, NonDegeneracy, Prv, Quadratic};
use crate::domain::Domain;
use crate::error::{Error, Result};

/// Structured description of a built-in map family.
///
/// ```json
/// {"family": "intermittent", "params": {"alpha": 0.1}}
/// ```
///
/// `domain` is optional and, when given, must equal the family's domain.
/// `nondegeneracy` overrides the stored `(B, beta)` constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapConfig {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Domain>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nondegeneracy: Option<NonDegeneracy>,
}

impl MapConfig {
    pub fn new(family: &str, params: &[(&str, f64)]) -> Self {
        MapConfig {
            family: family.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            domain: None,
            nondegeneracy: None,
        }
    }

    /// The config with every default made explicit.
    pub fn resolved(&self) -> Result<MapConfig> {
        let map = build_map(self)?;
        Ok(MapConfig {
            family: self.family.clone(),
            params: map.params().into_iter().collect(),
            domain: Some(map.domain()),
            nondegeneracy: map.nondegeneracy(),
        })
    }
}

/// Family names with their parameters and defaults.
pub fn list_families() -> Vec<(&'static str, &'static str)> {
    vec![
        ("doubling", "x -> 2x mod 1 on the circle [0,1); no parameters"),
        ("intermittent", "Pomeau-Manneville map on the circle [0,1); alpha (default 0.1)"),
        ("quadratic", "x -> 1 - a x^2 on [-1,1]; a in (0,2] (default 2)"),
        (
            "prv",
            "infinite-modal circle map on [-1,1); a=1, alpha=0.5, beta=pi, k0=1, k_max=50, y_hat, y_tilde, degree=2",
        ),
    ]
}

struct Params<'a> {
    family: &'a str,
    map: &'a BTreeMap<String, f64>,
    allowed: &'a [&'a str],
}

impl Params<'_> {
    fn check(&self) -> Result<()> {
        for k in self.map.keys() {
            if !self.allowed.contains(&k.as_str()) {
                return Err(Error::Config(format!(
                    "unknown parameter '{k}' for family '{}' (allowed: {:?})",
                    self.family, self.allowed
                )));
            }
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<f64> {
        self.map.get(key).copied()
    }

    fn get_u32(&self, key: &str) -> Result<Option<u32>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => Ok(Some(v as u32)),
            Some(v) => Err(Error::Config(format!("parameter '{key}' must be a non-negative integer, got {v}"))),
        }
    }
}

/// Instantiates the map described by `cfg`.
pub fn build_map(cfg: &MapConfig) -> Result<Box<dyn MapModel>> {
    let fam = cfg.family.as_str();
    let allowed: &[&str] = match fam {
        "doubling" => &[],
        "intermittent" => &["alpha"],
        "quadratic" => &["a"],
        "prv" => &["a", "alpha", "beta", "k0", "k_max", "y_hat", "y_tilde", "degree"],
        other => return Err(Error::Config(format!("unknown map family '{other}'"))),
    };
    let p = Params { family: fam, map: &cfg.params, allowed };
    p.check()?;

    let map: Box<dyn MapModel> = match fam {
        "doubling" => {
            let mut m = Doubling::new();
            if let Some(nd) = cfg.nondegeneracy {
                m = m.with_nondegeneracy(NonDegeneracy::new(nd.big_b, nd.beta)?);
            }
            Box::new(m)
        }
        "intermittent" => {
            let mut m = Intermittent::new(p.get("alpha").unwrap_or(0.1))?;
            if let Some(nd) = cfg.nondegeneracy {
                m = m.with_nondegeneracy(NonDegeneracy::new(nd.big_b, nd.beta)?);
            }
            Box::new(m)
        }
        "quadratic" => {
            let mut m = Quadratic::new(p.get("a").unwrap_or(2.0))?;
            if let Some(nd) = cfg.nondegeneracy {
                m = m.with_nondegeneracy(NonDegeneracy::new(nd.big_b, nd.beta)?);
            }
            Box::new(m)
        }
        "prv" => {
            let d = PrvParams::default();
            let params = PrvParams {
                a: p.get("a").unwrap_or(d.a),
                alpha: p.get("alpha").unwrap_or(d.alpha),
                beta: p.get("beta").unwrap_or(d.beta),
                k0: p.get_u32("k0")?,
                k_max: p.get_u32("k_max")?.unwrap_or(d.k_max),
                y_hat: p.get("y_hat"),
                y_tilde: p.get("y_tilde"),
                degree: p.get_u32("degree")?.unwrap_or(d.degree),
            };
            let mut m = Prv::new(params)?;
            if let Some(nd) = cfg.nondegeneracy {
                m = m.with_nondegeneracy(NonDegeneracy::new(nd.big_b, nd.beta)?);
            }
            Box::new(m)
        }
        _ => unreachable!(),
    };
    if let Some(dom) = cfg.domain {
        if dom != map.domain() {
            return Err(Error::Config(format!(
                "family '{fam}' lives on {:?}, config asked for {:?}",
                map.domain(),
                dom
            )));
        }
    }
    Ok(map)
}
