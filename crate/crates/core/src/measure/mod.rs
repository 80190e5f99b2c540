//! Histogram estimates of physical and stationary measures, Birkhoff
//! statistics and Wasserstein-1 distances.

mod birkhoff;
mod empirical;
mod estimate;
mod stability;
mod wasserstein;

pub use birkhoff::{birkhoff_average, lyapunov, slow_recurrence_average, Orbit};
pub use empirical::{EmpiricalMeasure, Histogram};
pub use estimate::{physical_measure, stationary_measure, MeasureRun, SamplingConfig};
pub use stability::{stability_curve, StabilityConfig, StabilityCurve};
pub use wasserstein::wasserstein1;
