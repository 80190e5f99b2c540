use thiserror::Error;

/// Errors raised by the engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("derivative vanishes or is singular at x = {x} (distance {dist:e} to the critical set)")]
    CriticalPoint { x: f64, dist: f64 },
    #[error("could not bracket a preimage of y = {y} on branch [{lo}, {hi}]")]
    BranchResolutionFailure { y: f64, lo: f64, hi: f64 },
    #[error("preimage tree exceeded the node budget of {budget}")]
    PreimageExplosion { budget: usize },
    #[error("perturbed point {x} left the interval domain [{lower}, {upper}]")]
    DomainExit { x: f64, lower: f64, upper: f64 },
    #[error("no feasible eta below {limit} for sigma = {sigma}")]
    NoFeasibleEta { sigma: f64, limit: f64 },
    #[error("histograms are not comparable: {0}")]
    BinMismatch(String),
    #[error("degenerate decay fit: {0}")]
    DegenerateFit(String),
    #[error("calibration failed: {0}")]
    CalibrationFailure(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
