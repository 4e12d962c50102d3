//! Counter-based random numbers.
//!
//! Noise cells and replicate seeds are pure functions of (seed, counter), so
//! datasets can be filled in any order — or in parallel — and still come out
//! bit-identical. The mixer is SplitMix64; normals come from Box-Muller on
//! two 53-bit uniforms, which keeps the tails clean out to |z| around 8.5.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer over a (seed, counter) pair.
#[inline]
pub fn mix64(seed: u64, counter: u64) -> u64 {
    let mut z = seed.wrapping_add(counter.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform in the open interval (0, 1), using the top 53 bits of the mix.
#[inline]
pub fn uniform_at(seed: u64, counter: u64) -> f64 {
    // (x + 0.5) / 2^53 never returns exactly 0 or 1.
    ((mix64(seed, counter) >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
}

/// Standard normal variate for one cell, independent of evaluation order.
#[inline]
pub fn normal_at(seed: u64, cell: u64) -> f64 {
    let u1 = uniform_at(seed, 2 * cell);
    let u2 = uniform_at(seed, 2 * cell + 1);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Domain tags keep independent uses of the same master seed from colliding.
pub mod tag {
    pub const NOISE: u64 = 0x01;
    pub const PLACEMENT: u64 = 0x02;
    pub const REPLICATE: u64 = 0x03;
    pub const BRIDGE: u64 = 0x04;
    pub const UNIFORMS: u64 = 0x05;
}

/// Derive a sub-seed, e.g. one per replicate: `derive(master, tag::REPLICATE, k)`.
#[inline]
pub fn derive(seed: u64, tag: u64, index: u64) -> u64 {
    mix64(mix64(seed, tag), index)
}

/// Sequential stream generator for the few places where draws are inherently
/// ordered (block placement). Seeded from the counter hierarchy so the whole
/// run is still reproducible from one master seed.
pub fn stream(seed: u64, tag: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, tag, index))
}
