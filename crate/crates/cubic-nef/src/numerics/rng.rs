//! Deterministic uniform random stream.
//!
//! The generator is ChaCha with 8 rounds: a counter-based stream cipher
//! whose output is specified byte-for-byte, so a given seed produces the
//! same sequence on every platform and in every run. Uniform doubles are
//! built from the top 53 bits of each 64-bit word.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded stream of uniform variates in `[0, 1)`. Single consumer; use
/// distinct seeds for independent streams.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Next uniform draw in `[0, 1)` with 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.rng.next_u64() >> 11) as f64 * SCALE
    }

    /// Next raw 64-bit word of the stream.
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}
