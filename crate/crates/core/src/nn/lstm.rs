//! Bidirectional LSTM encoder.
//!
//! Gate rows are laid out as (input, forget, cell, output), each `h` wide.

use alloc::vec;
use alloc::vec::Vec;

use super::init::uniform_fill;
use super::tensor::{check_len, Parameters, Tensor};
use crate::math::{dot, sigmoid, sqrt, tanh};
use crate::rng::Rng;
use crate::{Error, Result};

/// Parameters of one direction.
#[derive(Clone, Debug, PartialEq)]
pub struct LstmDirection {
    /// `4h x m`
    pub wx: Tensor,
    /// `4h x h`
    pub wh: Tensor,
    pub bx: Tensor,
    pub bh: Tensor,
}

impl LstmDirection {
    pub fn zeros(input: usize, hidden: usize) -> Self {
        LstmDirection {
            wx: Tensor::zeros(&[4 * hidden, input]),
            wh: Tensor::zeros(&[4 * hidden, hidden]),
            bx: Tensor::zeros(&[4 * hidden]),
            bh: Tensor::zeros(&[4 * hidden]),
        }
    }

    /// Weights uniform in `±1/sqrt(h)`, biases zero except a forget-gate
    /// bias of one.
    pub fn init(input: usize, hidden: usize, rng: &mut Rng) -> Self {
        let mut d = Self::zeros(input, hidden);
        let bound = 1.0 / sqrt(hidden as f64);
        uniform_fill(d.wx.data_mut(), bound, rng);
        uniform_fill(d.wh.data_mut(), bound, rng);
        d.bx.data_mut()[hidden..2 * hidden].fill(1.0);
        d
    }

    pub fn hidden(&self) -> usize {
        self.wh.cols()
    }

    pub fn input(&self) -> usize {
        self.wx.cols()
    }
}

impl Parameters for LstmDirection {
    fn tensors(&self) -> Vec<&Tensor> {
        vec![&self.wx, &self.wh, &self.bx, &self.bh]
    }

    fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        vec![&mut self.wx, &mut self.wh, &mut self.bx, &mut self.bh]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LstmParams {
    pub forward: LstmDirection,
    pub backward: LstmDirection,
}

impl LstmParams {
    pub fn zeros(input: usize, hidden: usize) -> Self {
        LstmParams {
            forward: LstmDirection::zeros(input, hidden),
            backward: LstmDirection::zeros(input, hidden),
        }
    }

    pub fn init(input: usize, hidden: usize, rng: &mut Rng) -> Self {
        let forward = LstmDirection::init(input, hidden, rng);
        let backward = LstmDirection::init(input, hidden, rng);
        LstmParams { forward, backward }
    }

    pub fn hidden(&self) -> usize {
        self.forward.hidden()
    }
}

impl Parameters for LstmParams {
    fn tensors(&self) -> Vec<&Tensor> {
        let mut t = self.forward.tensors();
        t.extend(self.backward.tensors());
        t
    }

    fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        let mut t = self.forward.tensors_mut();
        t.extend(self.backward.tensors_mut());
        t
    }
}

/// Activations of one step, kept for the backward pass.
#[derive(Clone, Debug)]
struct StepCache {
    h_prev: Vec<f64>,
    c_prev: Vec<f64>,
    i: Vec<f64>,
    f: Vec<f64>,
    g: Vec<f64>,
    o: Vec<f64>,
    tanh_c: Vec<f64>,
}

fn step(x: &[f64], h_prev: &[f64], c_prev: &[f64], p: &LstmDirection) -> (Vec<f64>, Vec<f64>, StepCache) {
    let h = p.hidden();
    let z: Vec<f64> = (0..4 * h)
        .map(|r| dot(p.wx.row(r), x) + dot(p.wh.row(r), h_prev) + p.bx.data()[r] + p.bh.data()[r])
        .collect();
    let i: Vec<f64> = z[..h].iter().map(|&v| sigmoid(v)).collect();
    let f: Vec<f64> = z[h..2 * h].iter().map(|&v| sigmoid(v)).collect();
    let g: Vec<f64> = z[2 * h..3 * h].iter().map(|&v| tanh(v)).collect();
    let o: Vec<f64> = z[3 * h..].iter().map(|&v| sigmoid(v)).collect();
    let c: Vec<f64> = (0..h).map(|j| f[j] * c_prev[j] + i[j] * g[j]).collect();
    let tanh_c: Vec<f64> = c.iter().map(|&v| tanh(v)).collect();
    let h_new = (0..h).map(|j| o[j] * tanh_c[j]).collect();
    let cache = StepCache {
        h_prev: h_prev.to_vec(),
        c_prev: c_prev.to_vec(),
        i,
        f,
        g,
        o,
        tanh_c,
    };
    (h_new, c, cache)
}

/// One LSTM step: returns the new hidden and cell states.
pub fn lstm_step(
    x: &[f64],
    h_prev: &[f64],
    c_prev: &[f64],
    params: &LstmDirection,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_len("lstm_step", "input", params.input(), x.len())?;
    check_len("lstm_step", "hidden state", params.hidden(), h_prev.len())?;
    check_len("lstm_step", "cell state", params.hidden(), c_prev.len())?;
    let (h, c, _) = step(x, h_prev, c_prev, params);
    Ok((h, c))
}

/// Backward through one step. Accumulates parameter gradients and returns
/// `(dx, dh_prev, dc_prev)`.
fn step_backward(
    x: &[f64],
    cache: &StepCache,
    dh: &[f64],
    dc_next: &[f64],
    p: &LstmDirection,
    grad: &mut LstmDirection,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let h = p.hidden();
    let mut dz = vec![0.0; 4 * h];
    let mut dc_prev = vec![0.0; h];
    for j in 0..h {
        let (i, f, g, o, tc) = (cache.i[j], cache.f[j], cache.g[j], cache.o[j], cache.tanh_c[j]);
        let d_o = dh[j] * tc;
        let dc = dc_next[j] + dh[j] * o * (1.0 - tc * tc);
        dz[j] = dc * g * i * (1.0 - i);
        dz[h + j] = dc * cache.c_prev[j] * f * (1.0 - f);
        dz[2 * h + j] = dc * i * (1.0 - g * g);
        dz[3 * h + j] = d_o * o * (1.0 - o);
        dc_prev[j] = dc * f;
    }
    let mut dx = vec![0.0; x.len()];
    let mut dh_prev = vec![0.0; h];
    for (r, &d) in dz.iter().enumerate() {
        if d == 0.0 {
            continue;
        }
        grad.bx.data_mut()[r] += d;
        grad.bh.data_mut()[r] += d;
        for ((gw, w), (xv, dxv)) in grad
            .wx
            .row_mut(r)
            .iter_mut()
            .zip(p.wx.row(r))
            .zip(x.iter().zip(dx.iter_mut()))
        {
            *gw += d * xv;
            *dxv += d * w;
        }
        for ((gw, w), (hv, dhv)) in grad
            .wh
            .row_mut(r)
            .iter_mut()
            .zip(p.wh.row(r))
            .zip(cache.h_prev.iter().zip(dh_prev.iter_mut()))
        {
            *gw += d * hv;
            *dhv += d * w;
        }
    }
    (dx, dh_prev, dc_prev)
}

/// Forward-pass record of [`bilstm_forward`].
#[derive(Clone, Debug)]
pub struct BiLstmCache {
    len: usize,
    fwd: Vec<StepCache>,
    bwd: Vec<StepCache>,
}

/// Encodes the first `len` rows of `seq` (an `n x m` tensor): the forward
/// direction reads rows `0..len`, the backward direction reads them in
/// reverse, and the output concatenates both final hidden states.
pub fn bilstm_forward(seq: &Tensor, len: usize, p: &LstmParams) -> Result<(Vec<f64>, BiLstmCache)> {
    if len == 0 {
        return Err(Error::InvalidInput("empty sequence".into()));
    }
    if len > seq.rows() {
        return Err(Error::ShapeMismatch {
            op: "bilstm",
            expected: alloc::format!("at least {len} rows"),
            found: alloc::format!("{}", seq.rows()),
        });
    }
    check_len("bilstm", "row", p.forward.input(), seq.cols())?;
    let h = p.hidden();
    let run = |d: &LstmDirection, order: &mut dyn Iterator<Item = usize>| {
        let mut hs = vec![0.0; h];
        let mut cs = vec![0.0; h];
        let mut caches = Vec::with_capacity(len);
        for t in order {
            let (hn, cn, cache) = step(seq.row(t), &hs, &cs, d);
            hs = hn;
            cs = cn;
            caches.push(cache);
        }
        (hs, caches)
    };
    let (hf, fwd) = run(&p.forward, &mut (0..len));
    let (hb, bwd) = run(&p.backward, &mut (0..len).rev());
    let mut out = hf;
    out.extend(hb);
    Ok((out, BiLstmCache { len, fwd, bwd }))
}

pub fn bilstm_encode(seq: &Tensor, p: &LstmParams) -> Result<Vec<f64>> {
    Ok(bilstm_forward(seq, seq.rows(), p)?.0)
}

/// Backpropagates `dout` (length `2h`) through both directions. Parameter
/// gradients accumulate into `grad`; the returned tensor has the shape of
/// `seq` with zeros beyond the encoded length.
pub fn bilstm_backward(
    seq: &Tensor,
    cache: &BiLstmCache,
    dout: &[f64],
    p: &LstmParams,
    grad: &mut LstmParams,
) -> Tensor {
    let h = p.hidden();
    let mut dseq = Tensor::zeros(seq.shape());
    let len = cache.len;
    let mut run = |d: &LstmDirection, g: &mut LstmDirection, caches: &[StepCache], dh_last: &[f64], reverse: bool| {
        let mut dh = dh_last.to_vec();
        let mut dc = vec![0.0; h];
        for (k, c) in caches.iter().enumerate().rev() {
            let t = if reverse { len - 1 - k } else { k };
            let (dx, dhp, dcp) = step_backward(seq.row(t), c, &dh, &dc, d, g);
            for (a, b) in dseq.row_mut(t).iter_mut().zip(dx) {
                *a += b;
            }
            dh = dhp;
            dc = dcp;
        }
    };
    run(&p.forward, &mut grad.forward, &cache.fwd, &dout[..h], false);
    run(&p.backward, &mut grad.backward, &cache.bwd, &dout[h..], true);
    dseq
}
