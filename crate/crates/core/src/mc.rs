//! Seeded Monte Carlo plumbing.
//!
//! Every sample owns an independent ChaCha stream derived from
//! `(master seed, sample index)`, so results do not depend on how samples are
//! distributed over worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::domain::Domain;

/// Stream id offsets that keep different uses of the same master seed apart.
pub mod stream {
    pub const INITIAL: u64 = 0;
    pub const NOISE: u64 = 1 << 40;
    pub const REFERENCE: u64 = 2 << 40;
    pub const CALIBRATION: u64 = 3 << 40;
}

pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn uniform_point<R: Rng + ?Sized>(domain: &Domain, rng: &mut R) -> f64 {
    let x = domain.lower + domain.length() * rng.gen::<f64>();
    domain.reduce(x.min(domain.upper))
}

/// Runs `f(index, rng)` for `index in 0..samples`, in parallel, returning the
/// results in index order.
pub fn par_samples<T, F>(samples: usize, seed: u64, stream_offset: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> T + Sync + Send,
{
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, stream_offset + i as u64);
            f(i, &mut rng)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent_of_thread_count() {
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| par_samples(64, 7, 0, |_, rng| rng.gen::<u64>()))
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn different_indices_differ() {
        let a: u64 = sample_rng(1, 0).gen();
        let b: u64 = sample_rng(1, 1).gen();
        assert_ne!(a, b);
    }
}
