//! Deterministic random number generation.
//!
//! Every randomized operation in the toolkit draws from [`Rng`], a seeded
//! ChaCha8 stream: identical seeds produce identical streams on every
//! platform. Derived streams (`derive`) give independent generators for
//! per-class / per-record work so parallel builders stay reproducible
//! under any scheduling.

use rand::distributions::Distribution;
use rand::{Rng as _, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded deterministic generator (ChaCha8 keyed from a 64-bit seed).
#[derive(Clone, Debug)]
pub struct Rng {
    seed: u64,
    inner: ChaCha8Rng,
}

// SplitMix64 finalizer; mixes (seed, stream) into a derived key.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent generator for substream `stream` of this seed.
    /// A function of (seed, stream) only; the parent's draw position is
    /// irrelevant, so derived streams are safe under parallel iteration.
    pub fn derive(&self, stream: u64) -> Self {
        let key = splitmix64(self.seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        Self {
            seed: key,
            inner: ChaCha8Rng::seed_from_u64(key),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform in [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in [0, n).
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    /// Standard normal draw.
    pub fn normal(&mut self) -> f64 {
        rand_distr::StandardNormal.sample(&mut self.inner)
    }

    /// Beta(alpha, alpha) draw, used for mixing coefficients.
    pub fn beta_symmetric(&mut self, alpha: f64) -> f64 {
        let beta = rand_distr::Beta::new(alpha, alpha).expect("alpha must be positive");
        beta.sample(&mut self.inner)
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.inner.gen_range(0..=i);
            items.swap(i, j);
        }
    }
}
