//! Reproducible random number streams.
//!
//! Every sampler in this crate is a pure function of its parameters and an
//! RNG, so reproducibility reduces to handing out deterministic, independent
//! streams. [`RngState`] is a (seed, stream) pair backed by ChaCha8: the same
//! pair always produces the same draws, bit for bit, and distinct streams are
//! independent regardless of the order in which they are consumed. Parallel
//! trial loops derive one stream per (method, n, trial) so results do not
//! depend on scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A reproducible RNG identity: a 64-bit seed plus a 64-bit stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngState {
    seed: u64,
    stream: u64,
}

impl RngState {
    /// Stream 0 of the given seed.
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Derives a counter-based substream. Used as
    /// `derive(&[method_id, n, trial])` by the experiment harness; the parts
    /// are mixed with a splitmix64-style hash so distinct part vectors map to
    /// distinct streams with overwhelming probability.
    pub fn derive(&self, parts: &[u64]) -> RngState {
        let mut h = self.stream ^ 0x9e37_79b9_7f4a_7c15;
        for &p in parts {
            h = mix64(h ^ mix64(p));
        }
        RngState {
            seed: self.seed,
            stream: h,
        }
    }

    /// Instantiates the generator for this (seed, stream) pair.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn identical_state_reproduces_draws() {
        let a: Vec<f64> = RngState::new(42).rng().sample_iter(rand::distr::StandardUniform).take(32).collect();
        let b: Vec<f64> = RngState::new(42).rng().sample_iter(rand::distr::StandardUniform).take(32).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn streams_differ() {
        let a: u64 = RngState::with_stream(7, 1).rng().random();
        let b: u64 = RngState::with_stream(7, 2).rng().random();
        assert_ne!(a, b);
    }

    #[test]
    fn derive_is_stable_and_injective_on_small_grids() {
        let base = RngState::new(3);
        let mut seen = std::collections::HashSet::new();
        for m in 0..3u64 {
            for n in 0..50u64 {
                for t in 0..20u64 {
                    let s = base.derive(&[m, n, t]).stream();
                    assert!(seen.insert(s), "stream collision at ({m},{n},{t})");
                }
            }
        }
        assert_eq!(
            base.derive(&[1, 2, 3]).stream(),
            base.derive(&[1, 2, 3]).stream()
        );
    }
}
