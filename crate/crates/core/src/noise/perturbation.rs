use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::AdaptedConstants;
use crate::error::{Error, Result};
use crate::hyperbolic::{adapted_hyperbolic_time, HyperbolicParams, DEFAULT_NODE_BUDGET};
use crate::maps::MapModel;

/// Where the adapted time entering `zeta` comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HSource {
    /// `H` evaluated at the point itself, memoized on the exact bit pattern.
    Exact,
    /// `H` evaluated once per cell of a uniform partition into `cells` pieces
    /// (at the cell centre) and reused for every point of the cell.
    Cells(usize),
    /// A fixed value, e.g. for maps whose adapted time is identically 1.
    Constant(usize),
}

/// The perturbation `zeta(x) = xi omega^(-eta H(x)^2)` together with the
/// noise amplitude `epsilon`.
pub struct AdaptedPerturbation<'a> {
    pub map: &'a dyn MapModel,
    pub params: HyperbolicParams,
    pub constants: AdaptedConstants,
    pub epsilon: f64,
    /// Preimage depth `L` of the adapted-time evaluator.
    pub depth: usize,
    /// Horizon `N_max` for first hyperbolic times.
    pub horizon: usize,
    pub node_budget: usize,
    source: HSource,
    cache: Mutex<HashMap<u64, usize>>,
    cells: Vec<OnceLock<usize>>,
}

impl<'a> AdaptedPerturbation<'a> {
    pub fn new(
        map: &'a dyn MapModel,
        params: HyperbolicParams,
        constants: AdaptedConstants,
        epsilon: f64,
        depth: usize,
        horizon: usize,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 0.5) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1/2], got {epsilon}")));
        }
        Ok(AdaptedPerturbation {
            map,
            params,
            constants,
            epsilon,
            depth,
            horizon,
            node_budget: DEFAULT_NODE_BUDGET,
            source: HSource::Exact,
            cache: Mutex::new(HashMap::new()),
            cells: Vec::new(),
        })
    }

    pub fn with_source(mut self, source: HSource) -> Self {
        self.source = source;
        self.cache = Mutex::new(HashMap::new());
        self.cells = match source {
            HSource::Cells(n) => (0..n.max(1)).map(|_| OnceLock::new()).collect(),
            _ => Vec::new(),
        };
        self
    }

    pub fn with_node_budget(mut self, budget: usize) -> Self {
        self.node_budget = budget;
        self
    }

    /// Same perturbation with another noise amplitude; the memo is not shared.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<AdaptedPerturbation<'a>> {
        let p = AdaptedPerturbation::new(
            self.map,
            self.params,
            self.constants,
            epsilon,
            self.depth,
            self.horizon,
        )?;
        Ok(p.with_source(self.source).with_node_budget(self.node_budget))
    }

    pub fn source(&self) -> HSource {
        self.source
    }

    /// Number of memoized adapted-time evaluations.
    pub fn cache_len(&self) -> usize {
        let exact = self.cache.lock().map(|c| c.len()).unwrap_or(0);
        exact + self.cells.iter().filter(|c| c.get().is_some()).count()
    }

    /// The adapted time `H_L(x)` on the full evaluator, bypassing the memo.
    pub fn adapted_time_exact(&self, x: f64) -> Result<usize> {
        adapted_hyperbolic_time(self.map, x, &self.params, self.depth, self.horizon, self.node_budget)
            .map(|a| a.value)
    }

    /// The adapted time used by `zeta`, according to the configured source.
    pub fn adapted_time(&self, x: f64) -> Result<usize> {
        match self.source {
            HSource::Constant(h) => Ok(h),
            HSource::Exact => {
                let key = x.to_bits();
                if let Some(&h) = self.cache.lock().expect("cache poisoned").get(&key) {
                    return Ok(h);
                }
                let h = self.adapted_time_exact(x)?;
                self.cache.lock().expect("cache poisoned").insert(key, h);
                Ok(h)
            }
            HSource::Cells(_) => {
                let d = self.map.domain();
                let n = self.cells.len();
                let i = (((x - d.lower) / d.length()) * n as f64).floor().clamp(0.0, (n - 1) as f64) as usize;
                if let Some(&h) = self.cells[i].get() {
                    return Ok(h);
                }
                let centre = d.lower + (i as f64 + 0.5) * d.length() / n as f64;
                let h = self.adapted_time_exact(centre)?;
                Ok(*self.cells[i].get_or_init(|| h))
            }
        }
    }

    /// `log zeta(x)`, finite even when `zeta` underflows.
    pub fn log_zeta(&self, x: f64) -> Result<f64> {
        let h = self.adapted_time(x)? as f64;
        Ok(self.log_zeta_at(h))
    }

    fn log_zeta_at(&self, h: f64) -> f64 {
        let c = &self.constants;
        c.xi.ln() - c.eta * h * h * c.omega.ln()
    }

    /// `zeta(x)`; values below the smallest normal double are clamped to it.
    pub fn zeta(&self, x: f64) -> Result<f64> {
        Ok(self.log_zeta(x)?.exp().max(f64::MIN_POSITIVE))
    }

    /// `zeta` for a given adapted time, without consulting the map.
    pub fn zeta_for(&self, h: usize) -> f64 {
        self.log_zeta_at(h as f64).exp().max(f64::MIN_POSITIVE)
    }
}
