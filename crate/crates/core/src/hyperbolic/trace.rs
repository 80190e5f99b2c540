use serde::Serialize;

use crate::maps::MapModel;

/// A finite orbit with the two Birkhoff summands used by hyperbolic-time
/// detection: `-log|Df(f^j x)|` and `log d_delta(f^j x, C)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitTrace {
    pub x0: f64,
    pub delta: f64,
    pub points: Vec<f64>,
    pub log_inv_deriv: Vec<f64>,
    pub log_trunc_dist: Vec<f64>,
    /// Step at which the orbit came within `tol_crit` of the critical set;
    /// the trace stops there.
    pub hit_critical: Option<usize>,
}

impl OrbitTrace {
    /// Number of complete steps (length of the log sequences).
    pub fn len(&self) -> usize {
        self.log_inv_deriv.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_inv_deriv.is_empty()
    }
}

/// Iterates `f` from `x0` for `n` steps.
pub fn trace_orbit<M: MapModel + ?Sized>(map: &M, x0: f64, n: usize, delta: f64) -> OrbitTrace {
    let mut points = Vec::with_capacity(n + 1);
    let mut lid = Vec::with_capacity(n);
    let mut ltd = Vec::with_capacity(n);
    let mut hit = None;
    let mut x = x0;
    points.push(x);
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
        x = map.eval(x);
        points.push(x);
    }
    OrbitTrace { x0, delta, points, log_inv_deriv: lid, log_trunc_dist: ltd, hit_critical: hit }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{Doubling, Intermittent, Quadratic};

    #[test]
    fn doubling_trace_has_constant_contraction() {
        let t = trace_orbit(&Doubling::new(), 0.1234, 5, 0.1);
        assert_eq!(t.points.len(), 6);
        assert!(t.log_inv_deriv.iter().all(|&v| v == -(2f64.ln())));
        assert!(t.log_trunc_dist.iter().all(|&v| v == 0.0));
        assert_eq!(t.hit_critical, None);
    }

    #[test]
    fn neutral_fixed_point_trace() {
        let t = trace_orbit(&Intermittent::new(0.5).unwrap(), 0.0, 7, 0.1);
        assert!(t.points.iter().all(|&p| p == 0.0));
        assert!(t.log_inv_deriv.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn critical_start_truncates_immediately() {
        let t = trace_orbit(&Quadratic::new(2.0).unwrap(), 0.0, 10, 0.1);
        assert_eq!(t.hit_critical, Some(0));
        assert!(t.is_empty());
        assert_eq!(t.points, vec![0.0]);
    }
}
