use alloc::vec::Vec;

use rand::Rng as _;

use crate::math::powf;
use crate::rng::Rng;

/// Negative-sampling distribution over word ids, proportional to
/// `count^0.75`.
#[derive(Clone, Debug)]
pub struct NoiseTable {
    cumulative: Vec<f64>,
}

pub const NOISE_POWER: f64 = 0.75;

impl NoiseTable {
    /// Panics if `counts` is empty or contains a zero.
    pub fn new(counts: &[u64]) -> Self {
        assert!(!counts.is_empty(), "noise table needs at least one word");
        let weights: Vec<f64> = counts
            .iter()
            .map(|&c| {
                assert!(c > 0, "noise table counts must be positive");
                powf(c as f64, NOISE_POWER)
            })
            .collect();
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        *cumulative.last_mut().unwrap() = 1.0;
        NoiseTable { cumulative }
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    pub fn probability(&self, id: u32) -> f64 {
        let i = id as usize;
        let lo = if i == 0 { 0.0 } else { self.cumulative[i - 1] };
        self.cumulative[i] - lo
    }

    #[inline]
    pub fn sample(&self, rng: &mut Rng) -> u32 {
        let u: f64 = rng.random();
        let i = self.cumulative.partition_point(|&c| c <= u);
        i.min(self.cumulative.len() - 1) as u32
    }
}
