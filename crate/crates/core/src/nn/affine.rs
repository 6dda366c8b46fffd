use alloc::vec::Vec;

use super::init::glorot;
use super::tensor::{check_len, Parameters, Tensor};
use crate::math::dot;
use crate::rng::Rng;
use crate::Result;

/// `y = W x + b` with `W: q x p`.
pub fn affine_forward(x: &[f64], w: &Tensor, b: &[f64]) -> Result<Vec<f64>> {
    let (q, p) = (w.rows(), w.cols());
    check_len("affine", "input", p, x.len())?;
    check_len("affine", "bias", q, b.len())?;
    Ok((0..q).map(|i| dot(w.row(i), x) + b[i]).collect())
}

/// Accumulates `dW += dy x^T`, `db += dy` and returns `dx = W^T dy`.
pub fn affine_backward(x: &[f64], w: &Tensor, dy: &[f64], dw: &mut Tensor, db: &mut [f64]) -> Vec<f64> {
    let p = w.cols();
    let mut dx = alloc::vec![0.0; p];
    for (i, &g) in dy.iter().enumerate() {
        if g == 0.0 {
            continue;
        }
        db[i] += g;
        for ((dwij, wij), (xj, dxj)) in dw
            .row_mut(i)
            .iter_mut()
            .zip(w.row(i))
            .zip(x.iter().zip(dx.iter_mut()))
        {
            *dwij += g * xj;
            *dxj += g * wij;
        }
    }
    dx
}

/// Fully connected layer.
#[derive(Clone, Debug, PartialEq)]
pub struct Linear {
    pub w: Tensor,
    pub b: Tensor,
}

impl Linear {
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Linear {
            w: Tensor::zeros(&[outputs, inputs]),
            b: Tensor::zeros(&[outputs]),
        }
    }

    pub fn init(inputs: usize, outputs: usize, rng: &mut Rng) -> Self {
        let mut l = Self::zeros(inputs, outputs);
        glorot(l.w.data_mut(), inputs, outputs, rng);
        l
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        affine_forward(x, &self.w, self.b.data())
    }

    /// Accumulates parameter gradients into `grad`; returns the input gradient.
    pub fn backward(&self, x: &[f64], dy: &[f64], grad: &mut Linear) -> Vec<f64> {
        affine_backward(x, &self.w, dy, &mut grad.w, grad.b.data_mut())
    }
}

impl Parameters for Linear {
    fn tensors(&self) -> Vec<&Tensor> {
        alloc::vec![&self.w, &self.b]
    }

    fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        alloc::vec![&mut self.w, &mut self.b]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::fdcheck::{assert_close, numeric_grad};

    #[test]
    fn identity_and_bias() {
        let eye = Tensor::matrix(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(affine_forward(&[3.0, -2.0], &eye, &[0.0, 0.0]).unwrap(), [3.0, -2.0]);
        let zero = Tensor::zeros(&[2, 2]);
        assert_eq!(affine_forward(&[3.0, -2.0], &zero, &[1.0, 2.0]).unwrap(), [1.0, 2.0]);
    }

    #[test]
    fn hand_product() {
        let w = Tensor::matrix(&[&[1.0, 1.0], &[0.0, 3.0]]);
        assert_eq!(affine_forward(&[1.0, 2.0], &w, &[0.0, 1.0]).unwrap(), [3.0, 7.0]);
    }

    #[test]
    fn shape_errors() {
        let w = Tensor::zeros(&[2, 3]);
        assert!(affine_forward(&[1.0, 2.0], &w, &[0.0, 0.0]).is_err());
        assert!(affine_forward(&[1.0, 2.0, 3.0], &w, &[0.0]).is_err());
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = crate::rng::seeded(3);
        let layer = Linear::init(4, 3, &mut rng);
        let x = [0.3, -1.2, 0.7, 2.0];
        let proj = [0.5, -1.0, 2.0];
        let loss = |l: &Linear, x: &[f64]| dot(&l.forward(x).unwrap(), &proj);
        let mut grad = Linear::zeros(4, 3);
        let dx = layer.backward(&x, &proj, &mut grad);
        assert_close(&dx, &numeric_grad(&x, |x| loss(&layer, x)), 1e-4);
        let dw = numeric_grad(layer.w.data(), |w| {
            let mut l = layer.clone();
            l.w.data_mut().copy_from_slice(w);
            loss(&l, &x)
        });
        assert_close(grad.w.data(), &dw, 1e-4);
        let db = numeric_grad(layer.b.data(), |b| {
            let mut l = layer.clone();
            l.b.data_mut().copy_from_slice(b);
            loss(&l, &x)
        });
        assert_close(grad.b.data(), &db, 1e-4);
    }
}
