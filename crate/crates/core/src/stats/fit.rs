use serde::Serialize;

use crate::error::{Error, Result};

/// Least-squares line through `(log n, log value)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub ns: Vec<usize>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn fit_decay(ns: &[usize], values: &[f64]) -> Result<DecayFit> {
    if ns.len() != values.len() {
        return Err(Error::InvalidParameter(format!("{} ns vs {} values", ns.len(), values.len())));
    }
    if ns.len() < 3 {
        return Err(Error::DegenerateFit(format!("need at least 3 points, got {}", ns.len())));
    }
    if ns.iter().any(|&n| n == 0) {
        return Err(Error::InvalidParameter("ns must be positive".into()));
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::DegenerateFit(format!("value {v} is not positive")));
    }
    let x: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all ns coincide".into()));
    }
    let spread = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - y.iter().cloned().fold(f64::INFINITY, f64::min);
    if spread <= 1e-12 * (1.0 + my.abs()) {
        return Err(Error::DegenerateFit("values are constant".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let res: f64 = x.iter().zip(&y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r2 = (1.0 - res / syy).clamp(0.0, 1.0);
    Ok(DecayFit { ns: ns.to_vec(), values: values.to_vec(), slope, intercept, r2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let ns = [2, 4, 8, 16, 32];
        let v: Vec<f64> = ns.iter().map(|&n| (n as f64).powi(-3)).collect();
        let f = fit_decay(&ns, &v).unwrap();
        assert!((f.slope + 3.0).abs() < 1e-9);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        let scaled: Vec<f64> = v.iter().map(|x| 7.5 * x).collect();
        assert!((fit_decay(&ns, &scaled).unwrap().slope - f.slope).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(fit_decay(&[1, 2, 3], &[0.5, 0.5, 0.5]), Err(Error::DegenerateFit(_))));
        assert!(matches!(fit_decay(&[1, 2], &[0.5, 0.25]), Err(Error::DegenerateFit(_))));
        assert!(matches!(fit_decay(&[1, 2, 4], &[0.5, 0.0, 0.1]), Err(Error::DegenerateFit(_))));
    }
}
