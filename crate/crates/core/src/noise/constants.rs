use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::HyperbolicParams;

/// Grid search for `eta` stops here.
pub const ETA_LIMIT: f64 = 1e3;

/// Constants of the adapted perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptedConstants {
    pub xi: f64,
    pub eta: f64,
    pub omega: f64,
    pub delta1: f64,
    /// Largest admissible noise amplitude, `min(1/2, delta1/2)`.
    pub epsilon0: f64,
    /// `C = B sigma^(-1/2)`, the derivative bound on hyperbolic-time
    /// neighbourhoods.
    pub c_dist: f64,
    pub sigma: f64,
}

impl AdaptedConstants {
    /// Radius of the shadowing ball around `f^j(x)`:
    /// `epsilon0 delta1 omega^(-eta (H - j))`.
    pub fn shadowing_bound(&self, adapted_time: usize, j: usize) -> f64 {
        let gap = adapted_time.saturating_sub(j) as f64;
        self.epsilon0 * self.delta1 * self.omega.powf(-self.eta * gap)
    }

    fn eta_feasible(c_dist: f64, sigma: f64, eta: f64) -> bool {
        let a = c_dist * sigma.powf(2.0 * eta - 0.5);
        let b = sigma.powf(2.0 * eta);
        a.max(b) < 0.5
    }
}

/// Picks `(delta1, omega, eta, xi, C)` for the given hyperbolic constants and
/// slow-recurrence level `gamma`.
///
/// `omega = max(exp(log B + beta (gamma - log delta)), sigma^(-1/2))`, and
/// `eta` is the first point of `1.5 + 0.1 k` (`k >= 1`) with
/// `max(C sigma^(2 eta - 1/2), sigma^(2 eta)) < 1/2`.
pub fn choose_constants(params: &HyperbolicParams, gamma: f64) -> Result<AdaptedConstants> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    let sigma = params.sigma;
    let delta1 = params.delta / 2.0;
    let inv_sqrt_sigma = sigma.powf(-0.5);
    let exp_form = (params.big_b.ln() + params.beta * (gamma - params.delta.ln())).exp();
    // omega must strictly exceed sigma^(-1/2)
    let omega = exp_form.max(inv_sqrt_sigma * (1.0 + 1e-9));
    let c_dist = params.big_b * inv_sqrt_sigma;

    let mut k = 1u32;
    let eta = loop {
        let eta = 1.5 + 0.1 * k as f64;
        if eta >= ETA_LIMIT {
            return Err(Error::NoFeasibleEta { sigma, limit: ETA_LIMIT });
        }
        if AdaptedConstants::eta_feasible(c_dist, sigma, eta) {
            break eta;
        }
        k += 1;
    };
    Ok(AdaptedConstants {
        xi: (delta1 / 2.0).min(0.5),
        eta,
        omega,
        delta1,
        epsilon0: 0.5f64.min(delta1 / 2.0),
        c_dist,
        sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_sigma_example() {
        let p = HyperbolicParams::new(0.25, 0.5, 1.0, 2.0).unwrap();
        let c = choose_constants(&p, 0.05).unwrap();
        assert!((c.c_dist - 4.0).abs() < 1e-12);
        // 4 * 0.25^2.7 ~ 0.0947 and 0.25^3.2 ~ 0.0117, both below 1/2
        assert!((c.eta - 1.6).abs() < 1e-12);
        assert!(c.omega >= 2.0);
        assert!(c.xi <= 0.5 && c.xi <= c.delta1 / 2.0);
        assert_eq!(c.delta1, 0.25);
        assert_eq!(c.epsilon0, 0.125);
    }

    #[test]
    fn invariants_hold_across_sigma() {
        for sigma in [0.1, 0.5, 0.8, 0.95, 0.99] {
            let p = HyperbolicParams::new(sigma, 0.25, 1.0, 3.0).unwrap();
            let c = choose_constants(&p, 0.01).unwrap();
            assert!(c.eta > 1.5);
            assert!((c.c_dist * sigma.powf(2.0 * c.eta - 0.5)).max(sigma.powf(2.0 * c.eta)) < 0.5);
            assert!(c.omega > sigma.powf(-0.5));
            assert!(c.delta1 <= 0.5);
            assert!(c.epsilon0 > 0.0 && c.epsilon0 <= 0.5);
        }
    }

    #[test]
    fn sigma_near_one_has_no_feasible_eta() {
        let p = HyperbolicParams::new(1.0 - 1e-6, 0.5, 1.0, 3.0).unwrap();
        assert!(matches!(choose_constants(&p, 0.01), Err(Error::NoFeasibleEta { .. })));
    }
}
