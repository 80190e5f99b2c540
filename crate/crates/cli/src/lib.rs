//! Batch experiment runner: JSON configs in, CSV/JSON artifacts and a run
//! manifest out.

pub mod config;
pub mod error;
pub mod runner;

pub use config::{ExperimentConfig, ExperimentKind};
pub use error::RunError;
pub use runner::{calibrate_map, run, RunManifest, RunOutput};
