//! Seed derivation for reproducible generation.
//!
//! Every random draw in the workspace flows from a single run seed through
//! [`derive_seed`], so any instance (or example within an instance) can be
//! regenerated in isolation without replaying the whole run.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One step of the splitmix64 sequence; advances `state` and returns the
/// mixed output.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Derive an independent child seed from a parent seed and a textual label.
///
/// Labels name the position in the generation tree (task, size, index, shot
/// example, ...), so sibling streams never collide and never depend on
/// iteration order.
pub fn derive_seed(parent: u64, label: &str) -> u64 {
    let mut state = parent ^ fnv1a(label);
    splitmix64(&mut state)
}

/// A deterministic RNG for the given seed.
///
/// ChaCha8 is pinned (rather than the library default generator) because its
/// stream is specified and stable across releases; regeneration from a stored
/// seed must stay byte-identical.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn derive_seed_is_stable() {
        let a = derive_seed(42, "explicit_stacks|8|0");
        let b = derive_seed(42, "explicit_stacks|8|0");
        assert_eq!(a, b);
    }

    #[test]
    fn labels_separate_streams() {
        let a = derive_seed(42, "explicit_stacks|8|0");
        let b = derive_seed(42, "explicit_stacks|8|1");
        let c = derive_seed(43, "explicit_stacks|8|0");
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rng_streams_are_reproducible() {
        let mut r1 = rng_from_seed(7);
        let mut r2 = rng_from_seed(7);
        let xs: Vec<u32> = (0..8).map(|_| r1.gen()).collect();
        let ys: Vec<u32> = (0..8).map(|_| r2.gen()).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn splitmix_reference_values() {
        // First outputs for state 0, cross-checked against the published
        // reference sequence.
        let mut s = 0u64;
        assert_eq!(splitmix64(&mut s), 0xe220a8397b1dcdaf);
        assert_eq!(splitmix64(&mut s), 0x6e789e6aa1b965f4);
        assert_eq!(splitmix64(&mut s), 0x06c45d188009454f);
    }
}
