//! Seed handling for reproducible experiments.
//!
//! A master seed is split into independent per-trial streams using the
//! ChaCha stream counter, so the stream for trial `i` does not depend on how
//! many trials run in total or in what order they complete.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type SimRng = ChaCha8Rng;

/// Stream reserved for setup work (drawing marked sets, random unitaries)
/// that must not collide with any trial stream.
pub const SETUP_STREAM: u64 = u64::MAX;

/// RNG for trial `index` under `master_seed`.
pub fn trial_rng(master_seed: u64, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

pub fn setup_rng(master_seed: u64) -> SimRng {
    trial_rng(master_seed, SETUP_STREAM)
}

/// Runs `trials` independent replicas on the rayon pool. Replica `i` gets
/// `trial_rng(master_seed, i)`; results come back in index order.
pub fn par_trials<T, F>(master_seed: u64, trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut SimRng) -> T + Sync + Send,
{
    (0..trials)
        .into_par_iter()
        .map(|i| f(i, &mut trial_rng(master_seed, i)))
        .collect()
}
