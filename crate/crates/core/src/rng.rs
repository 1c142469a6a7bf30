//! Seedable random source shared by the engine and the stochastic test
//! functions.
//!
//! Backed by ChaCha8. A child stream `(seed, k)` selects ChaCha stream
//! `k + 1` under the same key, so replicate `k` draws the same numbers no
//! matter which thread runs it or in what order. Streams are only promised
//! to be stable within one version of this crate.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSource {
    inner: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for replicate `index` of an experiment seeded with
    /// `seed`.
    pub fn child(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(index.wrapping_add(1));
        RandomSource { inner }
    }

    /// Engine seed for replicate `index`: the first word of its child
    /// stream.
    pub fn child_seed(seed: u64, index: u64) -> u64 {
        RandomSource::child(seed, index).next_u64()
    }

    /// Uniform draw on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform draw on `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal draw.
    pub fn gaussian(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_seeds_give_equal_streams() {
        let mut a = RandomSource::new(7);
        let mut b = RandomSource::new(7);
        for _ in 0..10_000 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
        }
        for _ in 0..10_000 {
            assert_eq!(a.gaussian().to_bits(), b.gaussian().to_bits());
        }
    }

    #[test]
    fn uniform_range() {
        let mut r = RandomSource::new(1);
        for _ in 0..10_000 {
            let u = r.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn gaussian_moments() {
        let mut r = RandomSource::new(3);
        let n = 200_000;
        let draws: Vec<f64> = (0..n).map(|_| r.gaussian()).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn children_are_distinct_and_order_independent() {
        let first: Vec<u64> = (0..4)
            .map(|k| RandomSource::child(11, k).next_u64())
            .collect();
        let reversed: Vec<u64> = (0..4)
            .rev()
            .map(|k| RandomSource::child(11, k).next_u64())
            .collect();
        let mut rev = reversed.clone();
        rev.reverse();
        assert_eq!(first, rev);
        let mut dedup = first.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 4);
        assert_ne!(
            RandomSource::child(11, 0).next_u64(),
            RandomSource::new(11).next_u64()
        );
    }
}
