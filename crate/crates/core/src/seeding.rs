//! Seed derivation and per-agent random streams.
//!
//! Every random draw in the crate comes from a [`Stream`]: a
//! `xoshiro256++` generator seeded through `rand_xoshiro`'s SplitMix64
//! expansion of a 64-bit seed. Seeds for sub-streams are derived from a
//! master seed and a path of integer tags:
//!
//! ```text
//! h0 = splitmix64(master)
//! hk = splitmix64(h(k-1) XOR tag_k)
//! ```
//!
//! where `splitmix64(x)` is the first output of a SplitMix64 generator whose
//! state is `x`. Generators use the path `[GENERATOR, agent]`, simulation
//! runs `[RUN, agent]`, and sweeps `[density_index, instance_index]`.
//! Integer ranges are sampled with `rand` 0.8's `gen_range`.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256PlusPlus};

pub type Stream = Xoshiro256PlusPlus;

/// Tag for instance generation streams.
pub const GENERATOR: u64 = 0x6765_6e65;
/// Tag for simulation streams.
pub const RUN: u64 = 0x7275_6e00;

fn splitmix(x: u64) -> u64 {
    SplitMix64::seed_from_u64(x).next_u64()
}

pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix(master), |h, tag| splitmix(h ^ tag))
}

pub fn stream(master: u64, path: &[u64]) -> Stream {
    Stream::seed_from_u64(derive_seed(master, path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_stable() {
        // Frozen so that a change of algorithm shows up as a test failure.
        assert_eq!(derive_seed(0, &[]), 0xe220_a839_7b1d_cdaf);
        assert_ne!(derive_seed(1, &[2, 3]), derive_seed(1, &[3, 2]));
        assert_eq!(derive_seed(9, &[1]), derive_seed(9, &[1]));
    }
}
