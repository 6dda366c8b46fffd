use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::arch::{backward, forward, Weights};
use super::config::{ClassifierConfig, Optimizer};
use super::model::{ClassifierModel, TokenTable};
use super::vectorize::{vectorize, DocMatrix, WordVectors};
use crate::evalkit::{evaluate_multiclass, evaluate_multilabel, MetricsReport};
use crate::math::sqrt;
use crate::nn::{binary_cross_entropy, cross_entropy, Parameters, Tensor};
use crate::rng::{self, stream};
use crate::textproc::{check_labels, Document, LabelCatalog};
use crate::{Error, Result, Task};

/// First-moment / second-moment state of the optimizer, one buffer per tensor.
pub struct OptimizerState {
    kind: Optimizer,
    step: u64,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

impl OptimizerState {
    pub fn new(kind: Optimizer, sizes: &[usize]) -> Self {
        let buffers = || sizes.iter().map(|&n| vec![0.0; n]).collect();
        let (m, v) = match kind {
            Optimizer::Adam { .. } => (buffers(), buffers()),
            Optimizer::Sgd { .. } => (Vec::new(), Vec::new()),
        };
        OptimizerState { kind, step: 0, m, v }
    }

    pub fn apply(&mut self, params: Vec<&mut Tensor>, grads: Vec<&Tensor>) {
        self.step += 1;
        match self.kind {
            Optimizer::Sgd { lr } => {
                for (p, g) in params.into_iter().zip(grads) {
                    for (w, d) in p.data_mut().iter_mut().zip(g.data()) {
                        *w -= lr * d;
                    }
                }
            }
            Optimizer::Adam { lr, beta1, beta2, eps } => {
                let t = self.step as i32;
                let c1 = 1.0 - libm::pow(beta1, f64::from(t));
                let c2 = 1.0 - libm::pow(beta2, f64::from(t));
                for (k, (p, g)) in params.into_iter().zip(grads).enumerate() {
                    let (m, v) = (&mut self.m[k], &mut self.v[k]);
                    for (((w, d), mi), vi) in p.data_mut().iter_mut().zip(g.data()).zip(m.iter_mut()).zip(v.iter_mut()) {
                        *mi = beta1 * *mi + (1.0 - beta1) * d;
                        *vi = beta2 * *vi + (1.0 - beta2) * d * d;
                        *w -= lr * (*mi / c1) / (sqrt(*vi / c2) + eps);
                    }
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub valid_macro_f1: Option<f64>,
    pub valid_micro_f1: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainHistory {
    pub epochs: Vec<EpochStats>,
    /// Epoch whose weights were kept (1-based); `None` when no epoch ran.
    pub best_epoch: Option<usize>,
}

/// Loss and score gradient of one document.
pub fn doc_loss(task: Task, scores: &[f64], labels: &[usize]) -> Result<(f64, Vec<f64>)> {
    match task {
        Task::Multiclass => cross_entropy(scores, labels[0]),
        Task::Multilabel => {
            let mut target = vec![0.0; scores.len()];
            for &l in labels {
                if l >= scores.len() {
                    return Err(Error::LabelOutOfRange { label: l, k: scores.len() });
                }
                target[l] = 1.0;
            }
            binary_cross_entropy(scores, &target)
        }
    }
}

/// Splits off `fraction` of `docs` (at least one document when there are
/// two or more) as a validation set, after a seeded shuffle.
pub fn holdout_split(docs: &[Document], fraction: f64, seed: u64) -> (Vec<Document>, Vec<Document>) {
    let mut idx: Vec<usize> = (0..docs.len()).collect();
    rng::shuffle(&mut rng::derive(seed, stream::SPLIT), &mut idx);
    let mut n_valid = libm::round(docs.len() as f64 * fraction) as usize;
    if docs.len() >= 2 {
        n_valid = n_valid.clamp(1, docs.len() - 1);
    } else {
        n_valid = 0;
    }
    let valid = idx[..n_valid].iter().map(|&i| docs[i].clone()).collect();
    let train = idx[n_valid..].iter().map(|&i| docs[i].clone()).collect();
    (train, valid)
}

/// Per-label metrics of `model` on `docs`.
pub fn evaluate<E: WordVectors + ?Sized>(model: &ClassifierModel, docs: &[Document], emb: &E) -> Result<MetricsReport> {
    let preds = docs
        .iter()
        .map(|d| Ok(model.predict(d, emb)?.labels))
        .collect::<Result<Vec<_>>>()?;
    score_predictions(model.config.task, model.config.k, docs, &preds)
}

pub fn score_predictions(task: Task, k: usize, docs: &[Document], preds: &[Vec<usize>]) -> Result<MetricsReport> {
    match task {
        Task::Multiclass => {
            let truth: Vec<usize> = docs.iter().map(|d| d.labels[0]).collect();
            let pred: Vec<usize> = preds.iter().map(|p| p[0]).collect();
            evaluate_multiclass(&truth, &pred, k)
        }
        Task::Multilabel => {
            let truth: Vec<Vec<usize>> = docs.iter().map(|d| d.labels.clone()).collect();
            evaluate_multilabel(&truth, preds, k)
        }
    }
}

fn check_dataset(docs: &[Document], cfg: &ClassifierConfig) -> Result<()> {
    check_labels(docs, cfg.task == Task::Multiclass)?;
    for d in docs {
        if let Some(&l) = d.labels.iter().find(|&&l| l >= cfg.k) {
            return Err(Error::LabelOutOfRange { label: l, k: cfg.k });
        }
    }
    Ok(())
}

struct Example {
    x: DocMatrix,
    /// Token-table row of each matrix row, when fine-tuning.
    rows: Vec<usize>,
}

/// Trains a classifier by mini-batch gradient descent on frozen word
/// vectors, keeping the epoch with the best validation macro-F1 (the last
/// epoch when `valid` is empty).
pub fn train_classifier<E: WordVectors + ?Sized>(
    train: &[Document],
    valid: &[Document],
    labels: &LabelCatalog,
    emb: &E,
    cfg: &ClassifierConfig,
) -> Result<(ClassifierModel, TrainHistory)> {
    cfg.validate()?;
    if train.is_empty() {
        return Err(Error::InvalidInput("training set is empty".into()));
    }
    if labels.len() != cfg.k {
        return Err(Error::InvalidConfig(alloc::format!(
            "label catalog has {} entries for k = {}",
            labels.len(),
            cfg.k
        )));
    }
    check_dataset(train, cfg)?;
    check_dataset(valid, cfg)?;

    let mut init_rng = rng::derive(cfg.seed, stream::CLASSIFIER_INIT);
    let weights = Weights::init(&cfg.arch, cfg.dim, cfg.k, &mut init_rng);
    let table = if cfg.fine_tune {
        Some(build_table(train, emb, cfg)?)
    } else {
        None
    };
    let mut model = ClassifierModel::new(cfg.clone(), weights, labels.clone(), emb.fingerprint(), table)?;
    let mut history = TrainHistory::default();
    if cfg.epochs == 0 {
        return Ok((model, history));
    }

    let examples = train
        .iter()
        .map(|d| {
            let x = vectorize(d, emb, cfg)?;
            let rows = match &model.token_table {
                Some(t) => d.tokens[..x.len].iter().map(|tok| t.id(tok).expect("table covers training tokens")).collect(),
                None => Vec::new(),
            };
            Ok(Example { x, rows })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut grad = Weights::zeros(&cfg.arch, cfg.dim, cfg.k);
    let mut table_grad = model.token_table.as_ref().map(|t| Tensor::zeros(t.vectors.shape()));
    let sizes: Vec<usize> = model
        .weights
        .tensors()
        .iter()
        .map(|t| t.len())
        .chain(model.token_table.as_ref().map(|t| t.vectors.len()))
        .collect();
    let mut opt = OptimizerState::new(cfg.optimizer, &sizes);
    let mut shuffle_rng = rng::derive(cfg.seed, stream::CLASSIFIER_SHUFFLE);
    let mut drop_rng = rng::derive(cfg.seed, stream::CLASSIFIER_DROPOUT);
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut best: Option<(f64, Weights, Option<TokenTable>)> = None;

    for epoch in 1..=cfg.epochs {
        rng::shuffle(&mut shuffle_rng, &mut order);
        let mut total_loss = 0.0;
        for (b, batch) in order.chunks(cfg.batch_size).enumerate() {
            grad.zero();
            if let Some(g) = table_grad.as_mut() {
                g.fill(0.0);
            }
            let mut batch_loss = 0.0;
            for &i in batch {
                let ex = &examples[i];
                let refreshed;
                let x = match &model.token_table {
                    Some(t) => {
                        let mut x = ex.x.clone();
                        for (r, &row) in ex.rows.iter().enumerate() {
                            x.rows.row_mut(r).copy_from_slice(t.vectors.row(row));
                        }
                        refreshed = x;
                        &refreshed
                    }
                    None => &ex.x,
                };
                let (scores, cache) = forward(&model.weights, x, cfg.dropout, Some(&mut drop_rng))?;
                let (loss, dscores) = doc_loss(cfg.task, &scores, &train[i].labels)?;
                batch_loss += loss;
                let dx = backward(&model.weights, x, &cache, &dscores, &mut grad);
                if let Some(g) = table_grad.as_mut() {
                    for (r, &row) in ex.rows.iter().enumerate() {
                        for (a, d) in g.row_mut(row).iter_mut().zip(dx.row(r)) {
                            *a += d;
                        }
                    }
                }
            }
            if !batch_loss.is_finite() {
                return Err(Error::NonFiniteLoss { epoch, batch: b });
            }
            total_loss += batch_loss;
            let scale = 1.0 / batch.len() as f64;
            for t in grad.tensors_mut() {
                t.data_mut().iter_mut().for_each(|v| *v *= scale);
            }
            if let Some(g) = table_grad.as_mut() {
                g.data_mut().iter_mut().for_each(|v| *v *= scale);
            }
            let mut params = model.weights.tensors_mut();
            let mut grads = grad.tensors();
            if let (Some(t), Some(g)) = (model.token_table.as_mut(), table_grad.as_ref()) {
                params.push(&mut t.vectors);
                grads.push(g);
            }
            opt.apply(params, grads);
        }

        let mut stats = EpochStats {
            epoch,
            train_loss: total_loss / train.len() as f64,
            valid_macro_f1: None,
            valid_micro_f1: None,
        };
        if valid.is_empty() {
            history.best_epoch = Some(epoch);
        } else {
            let report = evaluate(&model, valid, emb)?;
            stats.valid_macro_f1 = Some(report.macro_avg.f1);
            stats.valid_micro_f1 = Some(report.micro_avg.f1);
            if best.as_ref().is_none_or(|(f, _, _)| report.macro_avg.f1 > *f) {
                best = Some((report.macro_avg.f1, model.weights.clone(), model.token_table.clone()));
                history.best_epoch = Some(epoch);
            }
        }
        history.epochs.push(stats);
    }
    if let Some((_, w, t)) = best {
        model.weights = w;
        model.token_table = t;
    }
    Ok((model, history))
}

fn build_table<E: WordVectors + ?Sized>(docs: &[Document], emb: &E, cfg: &ClassifierConfig) -> Result<TokenTable> {
    let mut tokens: Vec<String> = Vec::new();
    let mut seen = hashbrown::HashSet::new();
    for d in docs {
        for t in d.tokens.iter().take(cfg.max_len) {
            if seen.insert(t.as_str()) {
                tokens.push(t.clone());
            }
        }
    }
    let mut data = Vec::with_capacity(tokens.len() * cfg.dim);
    for t in &tokens {
        data.extend(emb.vector(t)?.into_iter().map(f64::from));
    }
    let vectors = Tensor::from_vec(&[tokens.len(), cfg.dim], data)?;
    TokenTable::new(tokens, vectors)
}
