//! Portable, seed-reproducible sample streams.
//!
//! Stream layout for a run seeded with `seed` and `n` samples:
//!
//! 1. A SplitMix64 generator initialised with state `seed` emits `n` words
//!    `s_0..s_{n-1}`.
//! 2. Sample `i` draws from its own xoshiro256++ generator whose 256-bit
//!    state is four consecutive SplitMix64 outputs starting from state `s_i`.
//! 3. Uniforms are `(next_u64 >> 11) * 2^-53` in `[0, 1)`.
//! 4. Standard normals use the cosine branch of Box–Muller on two uniforms:
//!    `sqrt(-2 ln(1 - u1)) * cos(2π u2)`.
//!
//! Each sample owns a generator, so results are independent of evaluation
//! order.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256PlusPlus};

pub type SampleRng = Xoshiro256PlusPlus;

/// Per-sample seeds for a run.
pub fn sample_seeds(seed: u64, n: usize) -> Vec<u64> {
    let mut root = SplitMix64::seed_from_u64(seed);
    (0..n).map(|_| root.next_u64()).collect()
}

pub fn sample_rng(sample_seed: u64) -> SampleRng {
    Xoshiro256PlusPlus::seed_from_u64(sample_seed)
}

/// Uniform in `[0, 1)` with 53 random bits.
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn standard_normal<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    let u1 = 1.0 - uniform(rng);
    let u2 = uniform(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
