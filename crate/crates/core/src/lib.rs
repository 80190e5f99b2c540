//! Hyperbolic times and adapted random perturbations of one-dimensional
//! non-uniformly expanding maps.
//!
//! The crate is organised around the engines a stochastic-stability
//! experiment needs:
//!
//! - [`maps`]: map families with closed-form derivatives, critical sets and
//!   monotone branch partitions, plus branch-wise preimage solving;
//! - [`hyperbolic`]: orbit traces, `(sigma, delta)`-hyperbolic time detection,
//!   the first hyperbolic time `h`, the depth-truncated adapted time `H` and
//!   Monte Carlo tail tables;
//! - [`noise`]: the adapted perturbation `f_t(x) = f(x) + t zeta(x)` with
//!   `zeta(x) = xi omega^(-eta H(x)^2)`, random orbits and the preservation
//!   experiment;
//! - [`measure`]: histogram estimates of physical and stationary measures,
//!   Birkhoff averages, Wasserstein-1 and the stability curve;
//! - [`stats`]: large deviations, correlations and decay-exponent fits;
//! - [`calibrate`]: automatic choice of `(sigma, delta, gamma)` and of the
//!   perturbation constants.

pub mod calibrate;
pub mod domain;
pub mod error;
pub mod hyperbolic;
pub mod maps;
pub mod mc;
pub mod measure;
pub mod noise;
pub mod stats;

pub use domain::{Domain, DomainKind};
pub use error::{Error, Result};
pub use hyperbolic::HyperbolicParams;
pub use maps::{MapConfig, MapModel};

/// Version string recorded in run manifests.
pub const ENGINE_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
