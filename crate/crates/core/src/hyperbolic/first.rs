use serde::Serialize;

use super::{HyperbolicParams, IncrementalDetector};
use crate::maps::MapModel;

/// Outcome of the search for the first hyperbolic time within a horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FirstTime {
    Found(usize),
    /// No hyperbolic time up to the horizon.
    Censored,
    /// The orbit reached the critical set at this step before any
    /// hyperbolic time occurred.
    HitCritical(usize),
}

impl FirstTime {
    pub fn value(&self) -> Option<usize> {
        match *self {
            FirstTime::Found(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, FirstTime::Found(_))
    }
}

/// `h(x)`, the first `(sigma, delta)`-hyperbolic time of `x`, searched up to
/// `n_max` steps.
pub fn first_hyperbolic_time<M: MapModel + ?Sized>(
    map: &M,
    x: f64,
    params: &HyperbolicParams,
    n_max: usize,
) -> FirstTime {
    let mut det = IncrementalDetector::from_params(params);
    let mut y = x;
    for j in 0..n_max {
        let df = match map.deriv(y) {
            Ok(df) => df,
            Err(_) => return FirstTime::HitCritical(j),
        };
        let r = map.truncated_dist(y, params.delta).ln();
        if det.push(-df.abs().ln(), r) {
            return FirstTime::Found(j + 1);
        }
        y = map.eval(y);
    }
    FirstTime::Censored
}
