//! Seeded random streams.
//!
//! Every trial of every experiment gets its own ChaCha stream whose seed is a
//! SplitMix64 hash of `(master_seed, d, trial)`. Streams never depend on the
//! order in which trials run, so parallel and serial execution agree bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `trial` at dimension `d` under `master_seed`.
pub fn derive_seed(master_seed: u64, d: usize, trial: usize) -> u64 {
    let h = splitmix64(master_seed);
    let h = splitmix64(h ^ d as u64);
    splitmix64(h ^ (trial as u64).wrapping_mul(0xD1B5_4A32_D192_ED03))
}

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn trial_stream(master_seed: u64, d: usize, trial: usize) -> Stream {
    stream(derive_seed(master_seed, d, trial))
}
