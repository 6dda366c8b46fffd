use alloc::vec::Vec;

use super::activation::softmax;
use crate::math::{ln, sigmoid, softplus};
use crate::{Error, Result};

/// `-log softmax(logits)[label]` and its gradient `softmax - onehot`.
pub fn cross_entropy(logits: &[f64], label: usize) -> Result<(f64, Vec<f64>)> {
    if label >= logits.len() {
        return Err(Error::LabelOutOfRange {
            label,
            k: logits.len(),
        });
    }
    let mut grad = softmax(logits);
    // log-sum-exp form keeps the loss finite when the probability underflows
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + ln(logits.iter().map(|v| crate::math::exp(v - max)).sum::<f64>());
    let loss = lse - logits[label];
    grad[label] -= 1.0;
    Ok((loss, grad))
}

/// Mean per-component logistic loss and its gradient `(sigmoid(z) - t) / k`.
pub fn binary_cross_entropy(logits: &[f64], targets: &[f64]) -> Result<(f64, Vec<f64>)> {
    super::tensor::check_len("binary_cross_entropy", "targets", logits.len(), targets.len())?;
    if let Some(&bad) = targets.iter().find(|&&t| t != 0.0 && t != 1.0) {
        return Err(Error::InvalidTarget(bad));
    }
    let k = logits.len() as f64;
    // -[t log s(z) + (1-t) log(1-s(z))] = softplus(z) - t z
    let loss = logits
        .iter()
        .zip(targets)
        .map(|(&z, &t)| softplus(z) - t * z)
        .sum::<f64>()
        / k;
    let grad = logits
        .iter()
        .zip(targets)
        .map(|(&z, &t)| (sigmoid(z) - t) / k)
        .collect();
    Ok((loss, grad))
}
