//! Adapted random perturbations `f_t(x) = f(x) + t zeta(x)` with
//! `zeta(x) = xi omega^(-eta H(x)^2)`.

mod constants;
mod orbit;
mod perturbation;
mod preservation;

pub use constants::{choose_constants, AdaptedConstants, ETA_LIMIT};
pub use orbit::{
    detect_random_hyperbolic_times, perturbed_step, random_orbit, sample_noise, NoiseSeed, NoiseSequence,
    RandomOrbitTrace,
};
pub use perturbation::{AdaptedPerturbation, HSource};
pub use preservation::{preservation_experiment, PreservationConfig, PreservationReport};
