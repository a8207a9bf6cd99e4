//! Seed derivation and deterministic sampling helpers.
//!
//! Every stochastic stage (synthesis, patch sampling, splitting, weight
//! init, training shuffles, dropout) draws from a ChaCha8 stream seeded
//! through [`derive_seed`], so one root seed reproduces the whole
//! pipeline bit-for-bit and per-item streams stay independent.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Splitting rule: `splitmix64(root ^ fnv1a(domain) ^ (index * GOLDEN))`.
///
/// The domain string keeps streams for different stages disjoint even
/// when they share an index; the splitmix finalizer decorrelates nearby
/// (root, index) pairs.
pub fn derive_seed(root: u64, domain: &str, index: u64) -> u64 {
    const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
    splitmix64(root ^ fnv1a64(domain.as_bytes()) ^ index.wrapping_mul(GOLDEN))
}

/// ChaCha8 stream for one (root, domain, index) triple.
pub fn stream(root: u64, domain: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(root, domain, index))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Standard normal via Box-Muller on two uniforms.
///
/// Hand-rolled so the byte stream depends only on ChaCha8 and this
/// formula, not on a distribution crate's internal algorithm.
pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // u1 in (0, 1] so ln(u1) is finite.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Uniform in [lo, hi).
pub fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}
