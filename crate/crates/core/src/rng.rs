//! Seedable, splittable random streams.
//!
//! Every stochastic operation in the crate takes a `&mut SimRng`. Independent
//! streams are derived from `(seed, index)` pairs through ChaCha stream ids,
//! so trial `i` of a batch sees the same randomness regardless of thread
//! scheduling.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SimRng {
    inner: ChaCha8Rng,
}

impl SimRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream `index` of the family rooted at `seed`.
    pub fn stream(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(index);
        Self { inner }
    }

    /// Derive a child stream; the parent advances by one draw.
    pub fn split(&mut self) -> Self {
        let seed = self.inner.next_u64();
        Self::new(seed)
    }

    pub fn bit(&mut self) -> bool {
        self.inner.random::<bool>()
    }

    pub fn bits(&mut self, n: usize) -> Vec<bool> {
        (0..n).map(|_| self.bit()).collect()
    }

    pub fn unit(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    /// Standard normal deviate (Box-Muller).
    pub fn gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.unit();
        let u2 = self.unit();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Nonempty subset of `0..n`, each element included with probability 1/2.
    pub fn nonempty_subset(&mut self, n: usize) -> Vec<usize> {
        assert!(n > 0, "subset of an empty set");
        loop {
            let s: Vec<usize> = (0..n).filter(|_| self.bit()).collect();
            if !s.is_empty() {
                return s;
            }
        }
    }

    /// `k` distinct indices from `0..n`, uniformly, in sampled order.
    pub fn sample_distinct(&mut self, n: usize, k: usize) -> Vec<usize> {
        rand::seq::index::sample(&mut self.inner, n, k).into_vec()
    }
}

impl RngCore for SimRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
