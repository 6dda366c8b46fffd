use crate::math::sqrt;
use crate::rng::{uniform, Rng};

/// Uniform in `±sqrt(6 / (fan_in + fan_out))`.
pub fn glorot(data: &mut [f64], fan_in: usize, fan_out: usize, rng: &mut Rng) {
    let bound = sqrt(6.0 / (fan_in + fan_out) as f64);
    for v in data {
        *v = uniform(rng, -bound, bound);
    }
}

pub fn uniform_fill(data: &mut [f64], bound: f64, rng: &mut Rng) {
    for v in data {
        *v = uniform(rng, -bound, bound);
    }
}
