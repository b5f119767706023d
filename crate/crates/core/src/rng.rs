//! Seeded generator shared by every randomized routine.
//!
//! The generator is SplitMix64 (Steele, Lea and Flood): the state advances by
//! the golden-ratio increment `0x9e3779b97f4a7c15` and each output is the
//! state passed through the `(30, 27, 31)` xor-shift-multiply finalizer. The
//! seed is the initial state. A uniform draw in `[0, 1)` is
//! `(next_u64() >> 11) · 2^-53`.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

/// Identifier written into every machine-readable report.
pub const PRNG_ID: &str = "splitmix64";

pub type Rng = SplitMix64;

pub fn seeded(seed: u64) -> Rng {
    SplitMix64::seed_from_u64(seed)
}

/// Uniform double in `[0, 1)` built from the top 53 bits of one output.
pub fn unit_f64(rng: &mut Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Derives an independent stream seed from a base seed and a stream label.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut rng = seeded(base ^ stream.wrapping_mul(0xd1b5_4a32_d192_ed03));
    rng.next_u64()
}
