use rand::Rng;
use serde::{Deserialize, Serialize};

use super::AdaptedPerturbation;
use crate::error::{Error, Result};
use crate::hyperbolic::{detect_hyperbolic_times, HypTimeReport, HyperbolicParams, OrbitTrace};
use crate::maps::MapModel;
use crate::mc::sample_rng;

/// Identifies the random stream a noise sequence was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiseSeed {
    pub seed: u64,
    pub stream: u64,
}

/// A finite noise realisation `t_1, t_2, ...` with `|t_j| <= epsilon`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSequence {
    pub values: Vec<f64>,
    pub epsilon: f64,
    pub seed: Option<NoiseSeed>,
}

impl NoiseSequence {
    pub fn zeros(length: usize, epsilon: f64) -> Self {
        NoiseSequence { values: vec![0.0; length], epsilon, seed: None }
    }

    /// `t_j = epsilon u_j` with `u_j` uniform on `[-1, 1]`. Sequences drawn
    /// from the same generator state at different amplitudes are scaled copies.
    pub fn from_rng<R: Rng + ?Sized>(epsilon: f64, length: usize, rng: &mut R) -> Self {
        let values = (0..length).map(|_| epsilon * rng.gen_range(-1.0..=1.0)).collect();
        NoiseSequence { values, epsilon, seed: None }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// I.i.d. uniform noise on `[-epsilon, epsilon]`.
pub fn sample_noise(epsilon: f64, length: usize, seed: NoiseSeed) -> Result<NoiseSequence> {
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1/2], got {epsilon}")));
    }
    let mut rng = sample_rng(seed.seed, seed.stream);
    let mut s = NoiseSequence::from_rng(epsilon, length, &mut rng);
    s.seed = Some(seed);
    Ok(s)
}

/// A random orbit `f^j_t(x)` next to the unperturbed orbit `f^j(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomOrbitTrace {
    /// Random points with the Birkhoff summands of the unperturbed `Df`.
    pub trace: OrbitTrace,
    pub noise: NoiseSequence,
    pub unperturbed: Vec<f64>,
    /// `dist(f^j_t(x), f^j(x))` for each recorded point.
    pub deviations: Vec<f64>,
}

impl RandomOrbitTrace {
    pub fn points(&self) -> &[f64] {
        &self.trace.points
    }
}

/// One step of the perturbed map `f_t(x) = f(x) + t zeta(x)`.
pub fn perturbed_step(pert: &AdaptedPerturbation<'_>, x: f64, t: f64) -> Result<f64> {
    let map = pert.map;
    let fx = map.eval(x);
    if t == 0.0 {
        return Ok(fx);
    }
    let y = fx + t * pert.zeta(x)?;
    let d = map.domain();
    if d.is_circle() {
        Ok(d.reduce(y))
    } else if d.contains(y) {
        Ok(y)
    } else {
        Err(Error::DomainExit { x: y, lower: d.lower, upper: d.upper })
    }
}

/// Iterates `n` steps of the random composition from `x0`.
pub fn random_orbit(
    pert: &AdaptedPerturbation<'_>,
    x0: f64,
    noise: &NoiseSequence,
    n: usize,
) -> Result<RandomOrbitTrace> {
    if n > noise.len() {
        return Err(Error::InvalidParameter(format!(
            "orbit length {n} exceeds noise length {}",
            noise.len()
        )));
    }
    let map: &dyn MapModel = pert.map;
    let d = map.domain();
    let delta = pert.params.delta;
    let mut points = Vec::with_capacity(n + 1);
    let mut free = Vec::with_capacity(n + 1);
    let mut dev = Vec::with_capacity(n + 1);
    let mut lid = Vec::with_capacity(n);
    let mut ltd = Vec::with_capacity(n);
    let mut hit = None;
    let (mut x, mut u) = (x0, x0);
    points.push(x);
    free.push(u);
    dev.push(0.0);
    for j in 0..n {
        match map.deriv(x) {
            Ok(df) => {
                lid.push(-df.abs().ln());
                ltd.push(map.truncated_dist(x, delta).ln());
            }
            Err(_) => {
                hit = Some(j);
                break;
            }
        }
        x = perturbed_step(pert, x, noise.values[j])?;
        u = map.eval(u);
        points.push(x);
        free.push(u);
        dev.push(d.dist(x, u));
    }
    let trace = OrbitTrace { x0, delta, points, log_inv_deriv: lid, log_trunc_dist: ltd, hit_critical: hit };
    let used = NoiseSequence { values: noise.values[..n].to_vec(), epsilon: noise.epsilon, seed: noise.seed };
    Ok(RandomOrbitTrace { trace, noise: used, unperturbed: free, deviations: dev })
}

/// Hyperbolic times of the random orbit at the relaxed rate `sigma_hat`.
pub fn detect_random_hyperbolic_times(
    rtrace: &RandomOrbitTrace,
    params: &HyperbolicParams,
    sigma_hat: f64,
) -> Result<HypTimeReport> {
    let relaxed = params.with_sigma(sigma_hat)?;
    Ok(detect_hyperbolic_times(&rtrace.trace.log_inv_deriv, &rtrace.trace.log_trunc_dist, &relaxed))
}
