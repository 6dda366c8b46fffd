//! One-vs-rest linear SVM trained with the Pegasos projected subgradient
//! method. The bias is an extra weight on a constant feature of 1.

use alloc::vec;
use alloc::vec::Vec;

use super::tfidf::SparseVec;
use crate::math::sqrt;
use crate::rng::{self, stream};
use crate::{Error, Result, Task};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SvmConfig {
    pub lambda: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig {
            lambda: 1e-4,
            epochs: 20,
            seed: 0,
        }
    }
}

/// Pegasos state for one binary problem.
///
/// The iterate is kept as `scale * v` so the shrink step is O(1), and the
/// running sum of all iterates as `acc + sum_scale * v - u`. When `scale`
/// gets small the state is folded back into `acc` and `v` to bound rounding.
#[derive(Clone, Debug)]
pub struct BinaryPegasos {
    lambda: f64,
    v: Vec<f64>,
    scale: f64,
    v_sq: f64,
    u: Vec<f64>,
    acc: Vec<f64>,
    sum_scale: f64,
    steps: u64,
}

const MIN_SCALE: f64 = 1e-3;

#[inline]
fn sparse_dot(w: &[f64], x: &SparseVec) -> f64 {
    let bias = w[w.len() - 1];
    x.iter().map(|&(c, v)| w[c as usize] * v).sum::<f64>() + bias
}

impl BinaryPegasos {
    /// `dim` features plus the bias weight.
    pub fn new(dim: usize, lambda: f64) -> Self {
        BinaryPegasos {
            lambda,
            v: vec![0.0; dim + 1],
            scale: 1.0,
            v_sq: 0.0,
            u: vec![0.0; dim + 1],
            acc: vec![0.0; dim + 1],
            sum_scale: 0.0,
            steps: 0,
        }
    }

    /// Update number `t` (1-based, counted over the whole run) on `(x, y)`
    /// with `y` in {-1, +1}.
    pub fn step(&mut self, x: &SparseVec, y: f64, t: u64) {
        let eta = 1.0 / (self.lambda * t as f64);
        let margin = y * self.scale * sparse_dot(&self.v, x);
        if t > 1 {
            self.scale *= 1.0 - eta * self.lambda;
        }
        let mut delta: Option<f64> = None;
        if margin < 1.0 {
            let a = eta * y / self.scale;
            let last = self.v.len() - 1;
            let dot_vx = sparse_dot(&self.v, x);
            let x_sq: f64 = x.iter().map(|e| e.1 * e.1).sum::<f64>() + 1.0;
            for &(c, v) in x {
                self.v[c as usize] += a * v;
            }
            self.v[last] += a;
            self.v_sq += 2.0 * a * dot_vx + a * a * x_sq;
            delta = Some(a);
        }
        let norm = self.scale.abs() * sqrt(self.v_sq.max(0.0));
        let radius = 1.0 / sqrt(self.lambda);
        if norm > radius {
            self.scale *= radius / norm;
        }
        if let Some(a) = delta {
            let s = self.sum_scale;
            let last = self.u.len() - 1;
            for &(c, v) in x {
                self.u[c as usize] += s * a * v;
            }
            self.u[last] += s * a;
        }
        self.sum_scale += self.scale;
        self.steps += 1;
        if self.scale < MIN_SCALE {
            self.compact();
        }
    }

    fn compact(&mut self) {
        for ((a, v), u) in self.acc.iter_mut().zip(self.v.iter_mut()).zip(self.u.iter_mut()) {
            *a += self.sum_scale * *v - *u;
            *v *= self.scale;
            *u = 0.0;
        }
        self.v_sq = self.v.iter().map(|v| v * v).sum();
        self.scale = 1.0;
        self.sum_scale = 0.0;
    }

    /// Current iterate, bias last.
    pub fn weights(&self) -> Vec<f64> {
        self.v.iter().map(|x| x * self.scale).collect()
    }

    /// Mean of all iterates so far, bias last.
    pub fn average(&self) -> Vec<f64> {
        if self.steps == 0 {
            return self.weights();
        }
        let n = self.steps as f64;
        self.v
            .iter()
            .zip(&self.u)
            .zip(&self.acc)
            .map(|((v, u), a)| (a + self.sum_scale * v - u) / n)
            .collect()
    }
}

/// `lambda/2 |w|^2 + mean hinge` for weights with the bias last.
pub fn objective(w: &[f64], lambda: f64, x: &[SparseVec], y: &[f64]) -> f64 {
    let reg: f64 = w.iter().map(|v| v * v).sum::<f64>() * lambda / 2.0;
    let hinge: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, &yi)| (1.0 - yi * sparse_dot(w, xi)).max(0.0))
        .sum::<f64>()
        / x.len().max(1) as f64;
    reg + hinge
}

#[derive(Clone, Debug, PartialEq)]
pub struct SvmModel {
    pub task: Task,
    /// One row per label, `dim` features.
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub lambda: f64,
    pub epochs: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SvmHistory {
    /// Sum over labels of the objective at the averaged iterate, recorded at
    /// the end of each epoch.
    pub objective: Vec<f64>,
}

impl SvmModel {
    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn scores(&self, x: &SparseVec) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.bias)
            .map(|(w, b)| x.iter().map(|&(c, v)| w.get(c as usize).map_or(0.0, |wc| wc * v)).sum::<f64>() + b)
            .collect()
    }

    /// Multi-class: highest score (lowest id on ties). Multi-label: every
    /// positive score, or the top one when none is.
    pub fn predict(&self, x: &SparseVec) -> Vec<usize> {
        let s = self.scores(x);
        let mut top = 0;
        for (i, v) in s.iter().enumerate() {
            if *v > s[top] {
                top = i;
            }
        }
        match self.task {
            Task::Multiclass => vec![top],
            Task::Multilabel => {
                let pos: Vec<usize> = (0..s.len()).filter(|&i| s[i] > 0.0).collect();
                if pos.is_empty() {
                    vec![top]
                } else {
                    pos
                }
            }
        }
    }
}

/// Trains one binary SVM per label over `dim`-dimensional sparse features.
/// The returned model holds each label's average over all iterates.
pub fn train_svm(
    x: &[SparseVec],
    y: &[Vec<usize>],
    k: usize,
    dim: usize,
    task: Task,
    cfg: &SvmConfig,
) -> Result<(SvmModel, SvmHistory)> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            truth: y.len(),
            pred: x.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if !(cfg.lambda > 0.0 && cfg.lambda.is_finite()) {
        return Err(Error::InvalidConfig(alloc::format!("lambda must be positive, got {}", cfg.lambda)));
    }
    if let Some(&(c, _)) = x.iter().flatten().find(|e| e.0 as usize >= dim) {
        return Err(Error::ShapeMismatch {
            op: "svm",
            expected: alloc::format!("columns below {dim}"),
            found: alloc::format!("{c}"),
        });
    }
    for labels in y {
        if let Some(&l) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::LabelOutOfRange { label: l, k });
        }
    }
    if task == Task::Multiclass {
        let mut seen = vec![false; k];
        y.iter().filter_map(|l| l.first()).for_each(|&l| seen[l] = true);
        if k < 2 || seen.iter().filter(|&&s| s).count() < 2 {
            return Err(Error::InvalidInput("multiclass SVM needs at least two classes in the data".into()));
        }
    } else if k < 1 {
        return Err(Error::InvalidConfig("need at least one label".into()));
    }

    let targets: Vec<Vec<f64>> = (0..k)
        .map(|c| y.iter().map(|l| if l.contains(&c) { 1.0 } else { -1.0 }).collect())
        .collect();
    let mut solvers: Vec<BinaryPegasos> = (0..k).map(|_| BinaryPegasos::new(dim, cfg.lambda)).collect();
    let mut order: Vec<usize> = (0..x.len()).collect();
    let mut r = rng::derive(cfg.seed, stream::SVM);
    let mut history = SvmHistory::default();
    let mut t = 0u64;
    for _ in 0..cfg.epochs {
        rng::shuffle(&mut r, &mut order);
        for &i in &order {
            t += 1;
            for (s, ty) in solvers.iter_mut().zip(&targets) {
                s.step(&x[i], ty[i], t);
            }
        }
        history.objective.push(
            solvers
                .iter()
                .zip(&targets)
                .map(|(s, ty)| objective(&s.average(), cfg.lambda, x, ty))
                .sum(),
        );
    }
    let (weights, bias) = solvers
        .iter()
        .map(|s| {
            let mut w = s.average();
            let b = w.pop().unwrap_or(0.0);
            (w, b)
        })
        .unzip();
    Ok((
        SvmModel {
            task,
            weights,
            bias,
            lambda: cfg.lambda,
            epochs: cfg.epochs,
        },
        history,
    ))
}
