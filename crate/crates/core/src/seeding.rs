//! Deterministic seed derivation.
//!
//! A user seed is split per purpose by hashing the purpose label, and each
//! sample index gets its own ChaCha stream so results do not depend on how
//! work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for a named purpose derived from a root seed.
pub fn derive_seed(seed: u64, purpose: &str) -> u64 {
    purpose
        .bytes()
        .fold(splitmix64(seed), |acc, b| splitmix64(acc ^ b as u64))
}

/// Independent generator for item `index` of a stream rooted at `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = stream_rng(5, 0).random();
        let b: u64 = stream_rng(5, 0).random();
        let c: u64 = stream_rng(5, 1).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(derive_seed(1, "exact"), derive_seed(1, "thermal"));
        assert_eq!(derive_seed(1, "exact"), derive_seed(1, "exact"));
    }
}
