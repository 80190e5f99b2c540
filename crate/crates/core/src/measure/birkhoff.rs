use crate::error::{Error, Result};
use crate::hyperbolic::OrbitTrace;
use crate::maps::MapModel;
use crate::noise::RandomOrbitTrace;

/// Anything carrying the points `x_0, ..., x_{N-1}` of a finite orbit.
pub trait Orbit {
    fn orbit_points(&self) -> &[f64];
}

impl Orbit for OrbitTrace {
    fn orbit_points(&self) -> &[f64] {
        &self.points[..self.len()]
    }
}

impl Orbit for RandomOrbitTrace {
    fn orbit_points(&self) -> &[f64] {
        self.trace.orbit_points()
    }
}

impl Orbit for [f64] {
    fn orbit_points(&self) -> &[f64] {
        self
    }
}

impl Orbit for Vec<f64> {
    fn orbit_points(&self) -> &[f64] {
        self
    }
}

/// `N^-1 sum phi(x_j)`.
pub fn birkhoff_average<O, F>(orbit: &O, phi: F) -> Result<f64>
where
    O: Orbit + ?Sized,
    F: Fn(f64) -> f64,
{
    let pts = orbit.orbit_points();
    if pts.is_empty() {
        return Err(Error::InvalidParameter("Birkhoff average of an empty orbit".into()));
    }
    Ok(pts.iter().map(|&x| phi(x)).sum::<f64>() / pts.len() as f64)
}

/// Finite-time Lyapunov exponent `N^-1 sum log|Df(f^j x0)|`, summed with
/// Neumaier compensation.
pub fn lyapunov<M: MapModel + ?Sized>(map: &M, x0: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("Lyapunov exponent needs n >= 1".into()));
    }
    let mut x = x0;
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let v = map.deriv(x)?.abs().ln();
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
        x = map.eval(x);
    }
    Ok((sum + comp) / n as f64)
}

/// Mean of `-log d_delta` along the orbit.
pub fn slow_recurrence_average<M, O>(map: &M, orbit: &O, delta: f64) -> Result<f64>
where
    M: MapModel + ?Sized,
    O: Orbit + ?Sized,
{
    birkhoff_average(orbit, |x| -map.truncated_dist(x, delta).ln())
}
