//! Forward and backward passes of the three document classifiers.

use alloc::vec;
use alloc::vec::Vec;

use super::vectorize::DocMatrix;
use crate::nn::{
    bilstm_backward, bilstm_forward, conv_backward, conv_forward, dropout, relu, relu_backward,
    ArchSpec, BiLstmCache, ConvCache, ConvParams, Linear, LstmParams, Parameters, Tensor,
};
use crate::rng::Rng;
use crate::Result;

/// Trainable weights of a classifier, excluding word vectors.
#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    Linear { hidden: Linear, out: Linear },
    Birnn { lstm: LstmParams, out: Linear },
    Cnn { conv: ConvParams, out: Linear },
}

impl Weights {
    pub fn zeros(arch: &ArchSpec, m: usize, k: usize) -> Self {
        let out = Linear::zeros(arch.feature_len(), k);
        match arch {
            ArchSpec::Linear { hidden } => Weights::Linear {
                hidden: Linear::zeros(m, *hidden),
                out,
            },
            ArchSpec::Birnn { hidden } => Weights::Birnn {
                lstm: LstmParams::zeros(m, *hidden),
                out,
            },
            ArchSpec::Cnn(spec) => Weights::Cnn {
                conv: ConvParams::zeros(spec, m),
                out,
            },
        }
    }

    pub fn init(arch: &ArchSpec, m: usize, k: usize, rng: &mut Rng) -> Self {
        match arch {
            ArchSpec::Linear { hidden } => {
                let h = Linear::init(m, *hidden, rng);
                Weights::Linear {
                    hidden: h,
                    out: Linear::init(*hidden, k, rng),
                }
            }
            ArchSpec::Birnn { hidden } => {
                let lstm = LstmParams::init(m, *hidden, rng);
                Weights::Birnn {
                    lstm,
                    out: Linear::init(2 * hidden, k, rng),
                }
            }
            ArchSpec::Cnn(spec) => {
                let conv = ConvParams::init(spec, m, rng);
                Weights::Cnn {
                    conv,
                    out: Linear::init(spec.output_len(), k, rng),
                }
            }
        }
    }

    fn out(&self) -> &Linear {
        match self {
            Weights::Linear { out, .. } | Weights::Birnn { out, .. } | Weights::Cnn { out, .. } => out,
        }
    }

    fn out_mut(&mut self) -> &mut Linear {
        match self {
            Weights::Linear { out, .. } | Weights::Birnn { out, .. } | Weights::Cnn { out, .. } => out,
        }
    }
}

impl Parameters for Weights {
    fn tensors(&self) -> Vec<&Tensor> {
        let mut t = match self {
            Weights::Linear { hidden, .. } => hidden.tensors(),
            Weights::Birnn { lstm, .. } => lstm.tensors(),
            Weights::Cnn { conv, .. } => conv.tensors(),
        };
        t.extend(self.out().tensors());
        t
    }

    fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        match self {
            Weights::Linear { hidden, out } => {
                let mut t = hidden.tensors_mut();
                t.extend(out.tensors_mut());
                t
            }
            Weights::Birnn { lstm, out } => {
                let mut t = lstm.tensors_mut();
                t.extend(out.tensors_mut());
                t
            }
            Weights::Cnn { conv, out } => {
                let mut t = conv.tensors_mut();
                t.extend(out.tensors_mut());
                t
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Encoder {
    Linear { mean: Vec<f64>, pre: Vec<f64> },
    Birnn(BiLstmCache),
    Cnn(ConvCache),
}

/// Intermediate values of one forward pass.
#[derive(Clone, Debug)]
pub struct Cache {
    encoder: Encoder,
    mask: Vec<f64>,
    features: Vec<f64>,
}

/// Raw scores for one document. Dropout is applied when `rng` is given.
pub fn forward(w: &Weights, x: &DocMatrix, p_drop: f64, rng: Option<&mut Rng>) -> Result<(Vec<f64>, Cache)> {
    let (encoded, encoder) = match w {
        Weights::Linear { hidden, .. } => {
            let m = x.rows.cols();
            let mut mean = vec![0.0; m];
            for t in 0..x.len {
                for (a, v) in mean.iter_mut().zip(x.rows.row(t)) {
                    *a += v;
                }
            }
            let inv = 1.0 / x.len as f64;
            mean.iter_mut().for_each(|v| *v *= inv);
            let pre = hidden.forward(&mean)?;
            (relu(&pre), Encoder::Linear { mean, pre })
        }
        Weights::Birnn { lstm, .. } => {
            let (enc, cache) = bilstm_forward(&x.rows, x.len, lstm)?;
            (enc, Encoder::Birnn(cache))
        }
        Weights::Cnn { conv, .. } => {
            let len = x.len.max(conv.spec.max_window()).min(x.rows.rows());
            let (enc, cache) = conv_forward(&x.rows, len, conv)?;
            (enc, Encoder::Cnn(cache))
        }
    };
    let (features, mask) = dropout(&encoded, p_drop, rng);
    let scores = w.out().forward(&features)?;
    Ok((
        scores,
        Cache {
            encoder,
            mask,
            features,
        },
    ))
}

/// Accumulates weight gradients for `dscores` into `grad` and returns the
/// gradient with respect to the document rows.
pub fn backward(w: &Weights, x: &DocMatrix, cache: &Cache, dscores: &[f64], grad: &mut Weights) -> Tensor {
    let dfeat = w.out().backward(&cache.features, dscores, grad.out_mut());
    let denc: Vec<f64> = dfeat.iter().zip(&cache.mask).map(|(d, m)| d * m).collect();
    match (w, &cache.encoder, grad) {
        (Weights::Linear { hidden, .. }, Encoder::Linear { mean, pre }, Weights::Linear { hidden: g, .. }) => {
            let dpre = relu_backward(pre, &denc);
            let dmean = hidden.backward(mean, &dpre, g);
            let mut dx = Tensor::zeros(x.rows.shape());
            let inv = 1.0 / x.len as f64;
            for t in 0..x.len {
                for (d, v) in dx.row_mut(t).iter_mut().zip(&dmean) {
                    *d = v * inv;
                }
            }
            dx
        }
        (Weights::Birnn { lstm, .. }, Encoder::Birnn(c), Weights::Birnn { lstm: g, .. }) => {
            bilstm_backward(&x.rows, c, &denc, lstm, g)
        }
        (Weights::Cnn { conv, .. }, Encoder::Cnn(cache), Weights::Cnn { conv: g, .. }) => {
            conv_backward(&x.rows, cache, &denc, conv, g)
        }
        _ => panic!("gradient buffer does not match the architecture"),
    }
}
