//! Central finite differences for gradient tests.

use alloc::vec::Vec;

pub const STEP: f64 = 1e-5;

pub fn numeric_grad(at: &[f64], mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let mut x = at.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = x[i];
            x[i] = orig + STEP;
            let up = f(&x);
            x[i] = orig - STEP;
            let down = f(&x);
            x[i] = orig;
            (up - down) / (2.0 * STEP)
        })
        .collect()
}

/// Relative error with an absolute floor so near-zero gradients compare sanely.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-6)
}

pub fn assert_close(analytic: &[f64], numeric: &[f64], tol: f64) {
    assert_eq!(analytic.len(), numeric.len());
    for (i, (a, n)) in analytic.iter().zip(numeric).enumerate() {
        assert!(
            rel_err(*a, *n) < tol,
            "component {i}: analytic {a} vs numeric {n}"
        );
    }
}
