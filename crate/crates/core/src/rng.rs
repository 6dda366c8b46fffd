//! Seeded randomness. Every stochastic component takes its generator from
//! here so one run seed determines the whole pipeline.

use rand::{Rng as _, SeedableRng};
pub use rand_chacha::ChaCha8Rng as Rng;

/// Well-known stream ids used to derive independent generators from a run seed.
pub mod stream {
    pub const EMBEDDING: u64 = 1;
    pub const CLASSIFIER_INIT: u64 = 2;
    pub const CLASSIFIER_SHUFFLE: u64 = 3;
    pub const CLASSIFIER_DROPOUT: u64 = 4;
    pub const SVM: u64 = 5;
    pub const SPLIT: u64 = 6;
    pub const SYNTH: u64 = 7;
    pub const EMBEDDING_TRAIN: u64 = 8;
}

/// Generator for `stream` under run seed `seed`.
pub fn derive(seed: u64, stream: u64) -> Rng {
    let mut rng = Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Uniform in `[lo, hi)`.
#[inline]
pub fn uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Uniform integer in `[0, n)`.
#[inline]
pub fn below(rng: &mut Rng, n: usize) -> usize {
    rng.random_range(0..n)
}

/// Fisher-Yates shuffle.
pub fn shuffle<T>(rng: &mut Rng, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = below(rng, i + 1);
        items.swap(i, j);
    }
}
