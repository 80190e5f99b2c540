use serde::Serialize;

use super::{trace_orbit, HyperbolicParams};
use crate::error::{Error, Result};
use crate::maps::MapModel;
use crate::mc::{par_samples, stream, uniform_point};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailConfig {
    /// Expansion rate; the expansion clause is violated while the running
    /// average of `log|Df^-1|` exceeds `-c/3`.
    pub c: f64,
    /// Slow-recurrence level for the running average of `-log d_delta`.
    pub gamma: f64,
    pub ns: Vec<usize>,
    pub samples: usize,
    /// Finite horizon; defaults to `4 max(ns)`.
    pub horizon: Option<usize>,
    pub seed: u64,
}

/// Monte Carlo estimates of `lambda(Gamma_n)` and `lambda(h > n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailTable {
    pub ns: Vec<usize>,
    pub gamma_mass: Vec<f64>,
    pub h_tail_mass: Vec<f64>,
    /// Fraction with `h > n` but outside `Gamma_n`; reported, not asserted.
    pub h_outside_gamma: Vec<f64>,
    pub sample_count: usize,
    /// Samples whose `h` was not found within the horizon.
    pub censored: usize,
    pub horizon: usize,
    /// `(c, gamma, delta)`.
    pub gamma_params: (f64, f64, f64),
    #[serde(skip)]
    pub h_samples: Vec<Option<usize>>,
}

impl TailTable {
    /// CSV with header `n,gamma_mass,h_tail_mass,samples,censored`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,gamma_mass,h_tail_mass,samples,censored\n");
        for (i, n) in self.ns.iter().enumerate() {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                n, self.gamma_mass[i], self.h_tail_mass[i], self.sample_count, self.censored
            ));
        }
        s
    }
}

/// Finite-horizon proxies for the tail times: the last `n <= horizon` at which
/// the expansion average or the recurrence average is out of range. `None`
/// when the orbit reached the critical set.
pub(crate) fn tail_time<M: MapModel + ?Sized>(
    map: &M,
    params: &HyperbolicParams,
    c: f64,
    gamma: f64,
    x: f64,
    horizon: usize,
) -> (Option<usize>, Option<usize>) {
    let trace = trace_orbit(map, x, horizon, params.delta);
    let h = trace.hyperbolic_times(params).first;
    if trace.hit_critical.is_some() {
        return (None, h);
    }
    let mut sum_e = 0.0;
    let mut sum_d = 0.0;
    let mut last = 0;
    for j in 0..trace.len() {
        sum_e += trace.log_inv_deriv[j];
        sum_d -= trace.log_trunc_dist[j];
        let n = (j + 1) as f64;
        if sum_e / n > -c / 3.0 || sum_d / n > gamma {
            last = j + 1;
        }
    }
    (Some(last), h)
}

pub fn tail_table<M: MapModel + ?Sized>(
    map: &M,
    params: &HyperbolicParams,
    cfg: &TailConfig,
) -> Result<TailTable> {
    if !(cfg.c > 0.0) || !(cfg.gamma > 0.0) {
        return Err(Error::InvalidParameter("tail table needs c > 0 and gamma > 0".into()));
    }
    if cfg.ns.is_empty() || cfg.ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("ns must be non-empty and strictly ascending".into()));
    }
    let n_top = *cfg.ns.last().unwrap();
    let horizon = cfg.horizon.unwrap_or(4 * n_top);
    if horizon < 4 * n_top {
        return Err(Error::InvalidParameter(format!(
            "horizon {horizon} must be at least 4 max(ns) = {}",
            4 * n_top
        )));
    }
    let dom = map.domain();
    let rows = par_samples(cfg.samples, cfg.seed, stream::INITIAL, |_, rng| {
        let x = uniform_point(&dom, rng);
        tail_time(map, params, cfg.c, cfg.gamma, x, horizon)
    });

    let total = cfg.samples.max(1) as f64;
    let mut gamma_mass = Vec::with_capacity(cfg.ns.len());
    let mut h_tail = Vec::with_capacity(cfg.ns.len());
    let mut outside = Vec::with_capacity(cfg.ns.len());
    for &n in &cfg.ns {
        let in_gamma = |t: &Option<usize>| t.map_or(true, |t| t > n);
        let h_gt = |h: &Option<usize>| h.map_or(true, |h| h > n);
        gamma_mass.push(rows.iter().filter(|(t, _)| in_gamma(t)).count() as f64 / total);
        h_tail.push(rows.iter().filter(|(_, h)| h_gt(h)).count() as f64 / total);
        outside.push(rows.iter().filter(|(t, h)| h_gt(h) && !in_gamma(t)).count() as f64 / total);
    }
    let h_samples: Vec<Option<usize>> = rows.iter().map(|r| r.1).collect();
    Ok(TailTable {
        ns: cfg.ns.clone(),
        gamma_mass,
        h_tail_mass: h_tail,
        h_outside_gamma: outside,
        sample_count: cfg.samples,
        censored: h_samples.iter().filter(|h| h.is_none()).count(),
        horizon,
        gamma_params: (cfg.c, cfg.gamma, params.delta),
        h_samples,
    })
}

/// Partial sums of `sum n^p lambda(h = n)` on the grid `m = 1, 2, 4, ...`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpTailCheck {
    pub grid: Vec<usize>,
    pub partial_sums: Vec<f64>,
    /// Relative growth of the last two partial sums is below 1%.
    pub converged: bool,
    pub censored: usize,
}

pub fn lp_tail_check(h_samples: &[Option<usize>], p: f64) -> LpTailCheck {
    let total = h_samples.len().max(1) as f64;
    let max_h = h_samples.iter().flatten().copied().max().unwrap_or(1).max(1);
    let mut grid = vec![1usize];
    while *grid.last().unwrap() < max_h || grid.len() < 2 {
        grid.push(grid.last().unwrap() * 2);
    }
    let mut counts = vec![0usize; max_h + 1];
    for h in h_samples.iter().flatten() {
        counts[*h] += 1;
    }
    let mut partial_sums = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    let mut n = 1;
    for &m in &grid {
        while n <= m.min(max_h) {
            acc += (n as f64).powf(p) * counts[n] as f64 / total;
            n += 1;
        }
        partial_sums.push(acc);
    }
    let k = partial_sums.len();
    let (prev, last) = (partial_sums[k - 2], partial_sums[k - 1]);
    let converged = prev > 0.0 && (last - prev) / prev < 0.01;
    LpTailCheck {
        grid,
        partial_sums,
        converged,
        censored: h_samples.iter().filter(|h| h.is_none()).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::Doubling;

    #[test]
    fn doubling_has_empty_tail() {
        let p = HyperbolicParams::new(0.6, 0.5, 1.0, 2.5).unwrap();
        let cfg = TailConfig {
            c: 2f64.ln(),
            gamma: 0.05,
            ns: vec![1, 2, 4, 8],
            samples: 200,
            horizon: None,
            seed: 3,
        };
        let t = tail_table(&Doubling::new(), &p, &cfg).unwrap();
        assert!(t.gamma_mass.iter().all(|&m| m == 0.0));
        assert!(t.h_tail_mass.iter().all(|&m| m == 0.0));
        assert_eq!(t.horizon, 32);
        assert!(t.to_csv().starts_with("n,gamma_mass,h_tail_mass,samples,censored\n"));
    }

    #[test]
    fn short_horizon_rejected() {
        let p = HyperbolicParams::new(0.6, 0.5, 1.0, 2.5).unwrap();
        let cfg = TailConfig { c: 1.0, gamma: 0.1, ns: vec![4, 8], samples: 1, horizon: Some(16), seed: 0 };
        assert!(tail_table(&Doubling::new(), &p, &cfg).is_err());
    }

    #[test]
    fn constant_h_converges() {
        let r = lp_tail_check(&vec![Some(1); 100], 3.5);
        assert_eq!(r.partial_sums, vec![1.0, 1.0]);
        assert!(r.converged);
    }

    #[test]
    fn inverse_square_mass_diverges_at_p3() {
        // mass(h = n) proportional to 6 / (pi^2 n^2): n^3 * mass grows like n
        let mut samples = Vec::new();
        for n in 1..=512usize {
            let count = (1e6 * 6.0 / (std::f64::consts::PI.powi(2) * (n * n) as f64)).round() as usize;
            samples.extend(std::iter::repeat(Some(n)).take(count));
        }
        let r = lp_tail_check(&samples, 3.0);
        assert!(!r.converged);
        assert!(r.partial_sums.windows(2).all(|w| w[1] > 1.5 * w[0]));
    }
}
