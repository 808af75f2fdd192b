//! Counter-based random draws keyed by `(seed, stream, index)`, so results
//! do not depend on the order in which settings or shots are processed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct KeyedStream {
    rng: ChaCha8Rng,
}

impl KeyedStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Positions the stream so the next draw is the `index`-th uniform.
    pub fn seek(&mut self, index: u64) {
        self.rng.set_word_pos(2 * index as u128);
    }

    /// Uniform in [0, 1); each draw consumes exactly one 64-bit word pair.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

/// The `index`-th uniform of stream `(seed, stream)`.
pub fn keyed_uniform(seed: u64, stream: u64, index: u64) -> f64 {
    let mut s = KeyedStream::new(seed, stream);
    s.seek(index);
    s.uniform()
}

/// Number of successes in `n` Bernoulli(p) trials drawn from shot indices
/// `0..n` of the stream.
pub fn bernoulli_count(seed: u64, stream: u64, p: f64, n: u64) -> u64 {
    let mut s = KeyedStream::new(seed, stream);
    (0..n).filter(|_| s.uniform() < p).count() as u64
}
