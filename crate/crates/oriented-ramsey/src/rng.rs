//! Deterministic randomness plumbing.
//!
//! Every randomised operation in this crate takes an explicit `u64` seed
//! and expands it with the ChaCha8 stream cipher from `rand_chacha`, so
//! identical seeds give identical results on every platform and toolchain.
//! Where an operation needs a stream of fair bits, it consumes the raw
//! 64-bit output words of ChaCha8 least-significant-bit first, in a fixed
//! documented order; nothing depends on distribution adapters whose
//! rounding could drift between library versions.
//!
//! Sub-tasks (one trial of an experiment, one worker of a sweep) derive
//! their own seeds from a root seed, a textual label and an index via
//! [`derive_seed`]. The derivation is FNV-1a over the label, mixed with
//! the index through SplitMix64, and is stable public behaviour: reports
//! written by the command-line tool record only the root seed, and every
//! per-trial stream can be reproduced from it.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The crate-wide generator behind an explicit seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;
const GOLDEN: u64 = 0x9e3779b97f4a7c15;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(GOLDEN);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derives the seed for sub-task `index` of the task named `label` under
/// `root`. Distinct labels and distinct indices give independent streams.
pub fn derive_seed(root: u64, label: &str, index: u64) -> u64 {
    splitmix(splitmix(root ^ fnv1a(label.as_bytes())) ^ index.wrapping_mul(GOLDEN))
}

/// A stream of fair bits drawn from ChaCha8 output words, LSB first.
pub struct BitStream {
    rng: ChaCha8Rng,
    buf: u64,
    left: u32,
}

impl BitStream {
    pub fn new(seed: u64) -> Self {
        BitStream { rng: rng_from_seed(seed), buf: 0, left: 0 }
    }

    /// Continues an existing generator; bits interleave with any other
    /// draws made from it, so callers keep one hand on the stream.
    pub fn from_rng(rng: ChaCha8Rng) -> Self {
        BitStream { rng, buf: 0, left: 0 }
    }

    #[inline]
    pub fn next_bit(&mut self) -> bool {
        if self.left == 0 {
            self.buf = self.rng.next_u64();
            self.left = 64;
        }
        let bit = self.buf & 1 == 1;
        self.buf >>= 1;
        self.left -= 1;
        bit
    }
}

/// Uniform draw from `0..bound` by rejection on the top of the range, so
/// the result is unbiased and depends only on the ChaCha8 word stream.
pub fn uniform_below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    assert!(bound > 0, "uniform_below needs a positive bound");
    if bound.is_power_of_two() {
        return rng.next_u64() & (bound - 1);
    }
    let zone = u64::MAX - u64::MAX % bound;
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % bound;
        }
    }
}

/// Uniform draw from the inclusive range `lo..=hi`.
pub fn uniform_in(rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> u64 {
    debug_assert!(lo <= hi);
    lo + uniform_below(rng, hi - lo + 1)
}
