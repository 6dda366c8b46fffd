//! Convolution over the rows of an embedded sequence, followed by ReLU and
//! max-pooling over time.

use alloc::vec;
use alloc::vec::Vec;

use super::init::glorot;
use super::tensor::{check_len, Parameters, Tensor};
use crate::math::dot;
use crate::rng::Rng;
use crate::{Error, Result};

/// Window sizes (in rows) and filters per size. Each window spans the full
/// embedding width.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvSpec {
    pub sizes: Vec<usize>,
    pub filters: usize,
}

impl ConvSpec {
    pub fn new(sizes: Vec<usize>, filters: usize) -> Result<Self> {
        let spec = ConvSpec { sizes, filters };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.sizes.contains(&0) || self.filters == 0 {
            return Err(Error::InvalidConfig(alloc::format!(
                "conv needs window sizes >= 1 and filters >= 1, got {:?} x {}",
                self.sizes,
                self.filters
            )));
        }
        Ok(())
    }

    pub fn max_window(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(1)
    }

    pub fn output_len(&self) -> usize {
        self.sizes.len() * self.filters
    }
}

impl Default for ConvSpec {
    fn default() -> Self {
        ConvSpec {
            sizes: vec![2, 3, 4],
            filters: 50,
        }
    }
}

/// Filters of every window size: `weights[i]` is `filters x (sizes[i] * m)`
/// with window rows laid out consecutively.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvParams {
    pub spec: ConvSpec,
    pub weights: Vec<Tensor>,
    pub biases: Vec<Tensor>,
}

impl ConvParams {
    pub fn zeros(spec: &ConvSpec, m: usize) -> Self {
        ConvParams {
            spec: spec.clone(),
            weights: spec
                .sizes
                .iter()
                .map(|&s| Tensor::zeros(&[spec.filters, s * m]))
                .collect(),
            biases: spec.sizes.iter().map(|_| Tensor::zeros(&[spec.filters])).collect(),
        }
    }

    pub fn init(spec: &ConvSpec, m: usize, rng: &mut Rng) -> Self {
        let mut p = Self::zeros(spec, m);
        for (w, &s) in p.weights.iter_mut().zip(&spec.sizes) {
            glorot(w.data_mut(), s * m, spec.filters, rng);
        }
        p
    }

    pub fn width(&self) -> usize {
        self.weights[0].cols() / self.spec.sizes[0]
    }
}

impl Parameters for ConvParams {
    fn tensors(&self) -> Vec<&Tensor> {
        self.weights.iter().zip(&self.biases).flat_map(|(w, b)| [w, b]).collect()
    }

    fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        self.weights
            .iter_mut()
            .zip(self.biases.iter_mut())
            .flat_map(|(w, b)| [w, b])
            .collect()
    }
}

/// Winning window start per output component, or `None` when the pooled
/// activation was clipped to zero by the ReLU.
#[derive(Clone, Debug)]
pub struct ConvCache {
    argmax: Vec<Option<usize>>,
}

/// Convolves the first `len` rows of `seq`. Output components are ordered by
/// window size, then filter index.
pub fn conv_forward(seq: &Tensor, len: usize, p: &ConvParams) -> Result<(Vec<f64>, ConvCache)> {
    let m = seq.cols();
    check_len("conv_maxpool", "row", p.width(), m)?;
    let need = p.spec.max_window();
    if len < need || len > seq.rows() {
        return Err(Error::ShapeMismatch {
            op: "conv_maxpool",
            expected: alloc::format!("between {need} and {} rows", seq.rows()),
            found: alloc::format!("{len}"),
        });
    }
    let mut out = Vec::with_capacity(p.spec.output_len());
    let mut argmax = Vec::with_capacity(p.spec.output_len());
    for ((w, b), &s) in p.weights.iter().zip(&p.biases).zip(&p.spec.sizes) {
        for j in 0..p.spec.filters {
            let filter = w.row(j);
            let mut best = f64::NEG_INFINITY;
            let mut at = 0;
            for t in 0..=len - s {
                let window = &seq.data()[t * m..(t + s) * m];
                let z = dot(filter, window) + b.data()[j];
                if z > best {
                    best = z;
                    at = t;
                }
            }
            if best > 0.0 {
                out.push(best);
                argmax.push(Some(at));
            } else {
                out.push(0.0);
                argmax.push(None);
            }
        }
    }
    Ok((out, ConvCache { argmax }))
}

pub fn conv_maxpool(seq: &Tensor, p: &ConvParams) -> Result<Vec<f64>> {
    Ok(conv_forward(seq, seq.rows(), p)?.0)
}

/// Routes `dout` back to the winning window of each component.
pub fn conv_backward(seq: &Tensor, cache: &ConvCache, dout: &[f64], p: &ConvParams, grad: &mut ConvParams) -> Tensor {
    let m = seq.cols();
    let mut dseq = Tensor::zeros(seq.shape());
    let mut k = 0;
    for (si, &s) in p.spec.sizes.iter().enumerate() {
        for j in 0..p.spec.filters {
            let d = dout[k];
            if let (Some(t), true) = (cache.argmax[k], d != 0.0) {
                grad.biases[si].data_mut()[j] += d;
                let window = &seq.data()[t * m..(t + s) * m];
                for (g, x) in grad.weights[si].row_mut(j).iter_mut().zip(window) {
                    *g += d * x;
                }
                let filter = p.weights[si].row(j);
                for (dx, w) in dseq.data_mut()[t * m..(t + s) * m].iter_mut().zip(filter) {
                    *dx += d * w;
                }
            }
            k += 1;
        }
    }
    dseq
}
