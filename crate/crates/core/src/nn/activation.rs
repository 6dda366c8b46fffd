use alloc::vec::Vec;

use rand::Rng as _;

use crate::math::{exp, sigmoid as logistic};
use crate::rng::Rng;

/// Softmax with max subtraction. Panics on empty input.
pub fn softmax(x: &[f64]) -> Vec<f64> {
    assert!(!x.is_empty(), "softmax of an empty vector");
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = x.iter().map(|v| exp(v - max)).collect();
    let z: f64 = e.iter().sum();
    e.into_iter().map(|v| v / z).collect()
}

pub fn sigmoid(x: &[f64]) -> Vec<f64> {
    x.iter().map(|&v| logistic(v)).collect()
}

pub fn relu(x: &[f64]) -> Vec<f64> {
    x.iter().map(|&v| v.max(0.0)).collect()
}

/// Gradient through ReLU given its input.
pub fn relu_backward(x: &[f64], dy: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(dy)
        .map(|(&v, &g)| if v > 0.0 { g } else { 0.0 })
        .collect()
}

/// Inverted dropout. With `rng` (training) each entry is zeroed with
/// probability `p` and survivors are scaled by `1/(1-p)`; without it the
/// input passes through. Returns the output and the per-entry scale applied.
pub fn dropout(x: &[f64], p: f64, rng: Option<&mut Rng>) -> (Vec<f64>, Vec<f64>) {
    debug_assert!((0.0..1.0).contains(&p));
    let mask: Vec<f64> = match rng {
        Some(rng) if p > 0.0 => {
            let keep = 1.0 / (1.0 - p);
            x.iter()
                .map(|_| if rng.random::<f64>() < p { 0.0 } else { keep })
                .collect()
        }
        _ => alloc::vec![1.0; x.len()],
    };
    let y = x.iter().zip(&mask).map(|(v, m)| v * m).collect();
    (y, mask)
}
