//! Seedable, splittable random-number streams.
//!
//! Every randomized routine takes either an explicit generator or a seed it
//! derives one from. Independent trials use streams derived from
//! `(seed, trial index)`, so a parallel sweep produces the same numbers no
//! matter how trials are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used throughout the workspace.
pub type Rng64 = ChaCha8Rng;

/// SplitMix64 finalizer; decorrelates derived seeds.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Root generator for a run.
pub fn seed_rng(seed: u64) -> Rng64 {
    Rng64::seed_from_u64(seed)
}

/// Generator for trial `stream` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> Rng64 {
    Rng64::seed_from_u64(splitmix64(seed ^ splitmix64(stream.wrapping_add(1))))
}
