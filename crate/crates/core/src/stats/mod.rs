//! Large deviations, correlations and power-law decay fits.

mod corr;
mod fit;
mod ld;

pub use corr::{correlation_estimate, correlation_sweep, ChainConfig, CorrelationEstimate};
pub use fit::{fit_decay, DecayFit};
pub use ld::{ld_curve, ld_estimate, reference_mean, LdConfig, LdEstimate, MeasureMode};

/// Rows `n,value,stderr` followed by a `fit` footer row
/// `fit,<slope>,<intercept>,<r2>` when a fit is supplied.
pub fn series_csv(rows: &[(usize, f64, f64)], fit: Option<&DecayFit>) -> String {
    let mut s = String::from("n,value,stderr\n");
    for (n, v, e) in rows {
        s.push_str(&format!("{n},{v},{e}\n"));
    }
    if let Some(f) = fit {
        s.push_str(&format!("fit,{},{},{}\n", f.slope, f.intercept, f.r2));
    }
    s
}
