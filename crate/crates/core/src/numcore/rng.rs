//! Seeded random streams.
//!
//! Each [`Rng`] wraps a ChaCha8 generator, which is counter-based: output word `i`
//! is a pure function of `(key, i)`, so streams are bit-identical across platforms.
//! Sub-streams for grid cells and trials get their key from [`derive_seed`], which
//! folds a path of indices into the master seed with the SplitMix64 finalizer.

use rand::seq::index;
use rand::{Rng as _, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer (Stafford variant 13).
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a master seed with a path of stream indices into a sub-seed.
///
/// Grid cells and trials get their own reproducible streams regardless of the
/// order in which they run.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix64(seed), |acc, &id| {
        mix64(acc ^ mix64(id.wrapping_add(GAMMA)))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent generator for the sub-stream `path` of `seed`.
    pub fn derive(seed: u64, path: &[u64]) -> Self {
        Self::new(derive_seed(seed, path))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 32-bit words consumed so far.
    pub fn position(&self) -> u128 {
        self.inner.get_word_pos()
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        self.inner.gen_range(0..n)
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    pub fn normal_vec(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.normal()).collect()
    }

    pub fn poisson(&mut self, mean: f64) -> u64 {
        assert!(mean.is_finite() && mean >= 0.0, "poisson mean {mean}");
        if mean == 0.0 {
            return 0;
        }
        let draw: f64 = Poisson::new(mean)
            .expect("positive mean")
            .sample(&mut self.inner);
        draw as u64
    }

    /// `k` distinct indices from `0..n`.
    pub fn sample_without_replacement(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot sample {k} of {n}");
        if k == n {
            // full batch: order does not matter
            return (0..n).collect();
        }
        index::sample(&mut self.inner, n, k).into_vec()
    }
}
