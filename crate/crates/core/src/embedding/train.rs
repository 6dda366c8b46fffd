//! CBOW and skipgram training with negative sampling.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use super::model::{mean_rows, EmbeddingHyper, EmbeddingModel, Mode};
use super::noise::NoiseTable;
use super::store::RowStore;
use crate::math::{sigmoidf, softplus, sqrt};
use crate::rng::{self, Rng};
use crate::textproc::Vocabulary;
use crate::Result;

/// Attempts at drawing a negative different from the target before giving up
/// on that sample.
pub const NEGATIVE_REDRAWS: usize = 8;

/// Learning rate decaying linearly from `lr0` to zero over `total` token visits.
#[derive(Clone, Copy, Debug)]
pub struct Schedule {
    lr0: f32,
    total: u64,
}

impl Schedule {
    pub fn new(lr0: f32, total: u64) -> Self {
        Schedule { lr0, total }
    }

    #[inline]
    pub fn lr(&self, visits: u64) -> f32 {
        if self.total == 0 {
            return self.lr0;
        }
        let progress = (visits as f64 / self.total as f64).min(1.0);
        (f64::from(self.lr0) * (1.0 - progress)) as f32
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LossStats {
    pub loss: f64,
    pub targets: u64,
}

impl LossStats {
    pub fn mean(&self) -> f64 {
        if self.targets == 0 {
            0.0
        } else {
            self.loss / self.targets as f64
        }
    }
}

impl core::ops::AddAssign for LossStats {
    fn add_assign(&mut self, o: Self) {
        self.loss += o.loss;
        self.targets += o.targets;
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainReport {
    /// Mean negative-sampling loss per target, one entry per epoch.
    pub epoch_loss: Vec<f64>,
}

/// Maps corpus lines to word ids, dropping tokens outside the vocabulary.
pub fn encode_corpus<S: AsRef<str>>(vocab: &Vocabulary, corpus: &[S]) -> Vec<Vec<u32>> {
    corpus
        .iter()
        .map(|l| {
            l.as_ref()
                .split_whitespace()
                .filter_map(|t| vocab.id(t))
                .collect::<Vec<_>>()
        })
        .filter(|s| !s.is_empty())
        .collect()
}

/// Per-worker training state. One trainer drives one stream of sentences
/// over a pair of row stores.
pub struct Trainer<'a> {
    hyper: &'a EmbeddingHyper,
    subwords: &'a [Vec<u32>],
    noise: &'a NoiseTable,
    keep_prob: Option<Vec<f32>>,
    rng: Rng,
    hidden: Vec<f32>,
    grad: Vec<f32>,
    scratch: Vec<f32>,
    repr: Vec<f32>,
    kept: Vec<u32>,
}

impl<'a> Trainer<'a> {
    pub fn new(
        hyper: &'a EmbeddingHyper,
        vocab: &Vocabulary,
        subwords: &'a [Vec<u32>],
        noise: &'a NoiseTable,
        rng: Rng,
    ) -> Self {
        let keep_prob = hyper.subsample.map(|t| {
            let total = vocab.total_tokens().max(1) as f64;
            (0..vocab.len() as u32)
                .map(|id| {
                    let f = vocab.count(id) as f64 / total;
                    (sqrt(t / f) + t / f).min(1.0) as f32
                })
                .collect()
        });
        let m = hyper.dim;
        Trainer {
            hyper,
            subwords,
            noise,
            keep_prob,
            rng,
            hidden: vec![0.0; m],
            grad: vec![0.0; m],
            scratch: vec![0.0; m],
            repr: vec![0.0; m],
            kept: Vec::new(),
        }
    }

    /// Trains on one sentence. `visits` is the number of token visits made
    /// before this sentence, used for the learning-rate schedule.
    pub fn sentence<I: RowStore, O: RowStore>(
        &mut self,
        sent: &[u32],
        input: &mut I,
        output: &mut O,
        schedule: &Schedule,
        visits: u64,
    ) -> LossStats {
        let mut kept = core::mem::take(&mut self.kept);
        kept.clear();
        match &self.keep_prob {
            Some(keep) => {
                for &w in sent {
                    if self.rng.random::<f32>() < keep[w as usize] {
                        kept.push(w);
                    }
                }
            }
            None => kept.extend_from_slice(sent),
        }
        let mut stats = LossStats::default();
        let n = kept.len();
        for t in 0..n {
            let lr = schedule.lr(visits + t as u64);
            let radius = 1 + rng::below(&mut self.rng, self.hyper.window);
            let lo = t.saturating_sub(radius);
            let hi = (t + radius).min(n - 1);
            if hi == lo {
                continue;
            }
            match self.hyper.mode {
                Mode::Cbow => {
                    let ctx = (lo..=hi).filter(|&c| c != t).map(|c| kept[c]);
                    stats += self.cbow(ctx, kept[t], input, output, lr);
                }
                Mode::Skipgram => {
                    for c in (lo..=hi).filter(|&c| c != t) {
                        stats += self.skipgram(kept[t], kept[c], input, output, lr);
                    }
                }
            }
        }
        self.kept = kept;
        stats
    }

    fn cbow<I: RowStore, O: RowStore>(
        &mut self,
        context: impl Iterator<Item = u32> + Clone,
        target: u32,
        input: &mut I,
        output: &mut O,
        lr: f32,
    ) -> LossStats {
        self.hidden.iter_mut().for_each(|v| *v = 0.0);
        let mut count = 0usize;
        for w in context.clone() {
            mean_rows(input, &self.subwords[w as usize], &mut self.repr);
            for (h, r) in self.hidden.iter_mut().zip(&self.repr) {
                *h += r;
            }
            count += 1;
        }
        let inv = 1.0 / count as f32;
        self.hidden.iter_mut().for_each(|v| *v *= inv);
        let stats = self.negative_sampling(output, target, lr);
        for w in context {
            for &row in &self.subwords[w as usize] {
                input.add_row(row as usize, 1.0, &self.grad);
            }
        }
        stats
    }

    fn skipgram<I: RowStore, O: RowStore>(
        &mut self,
        center: u32,
        target: u32,
        input: &mut I,
        output: &mut O,
        lr: f32,
    ) -> LossStats {
        let rows = &self.subwords[center as usize];
        mean_rows(input, rows, &mut self.hidden);
        let stats = self.negative_sampling(output, target, lr);
        for &row in rows {
            input.add_row(row as usize, 1.0, &self.grad);
        }
        stats
    }

    /// One positive and `negatives` noise targets against `self.hidden`.
    /// Leaves the step for the input rows in `self.grad`.
    fn negative_sampling<O: RowStore>(&mut self, output: &mut O, target: u32, lr: f32) -> LossStats {
        self.grad.iter_mut().for_each(|v| *v = 0.0);
        let mut loss = self.binary_step(output, target, true, lr);
        for _ in 0..self.hyper.negatives {
            let drawn = (0..NEGATIVE_REDRAWS)
                .map(|_| self.noise.sample(&mut self.rng))
                .find(|&n| n != target);
            if let Some(neg) = drawn {
                loss += self.binary_step(output, neg, false, lr);
            }
        }
        LossStats { loss, targets: 1 }
    }

    fn binary_step<O: RowStore>(&mut self, output: &mut O, row: u32, positive: bool, lr: f32) -> f64 {
        output.read_row(row as usize, &mut self.scratch);
        let score: f32 = self.scratch.iter().zip(&self.hidden).map(|(u, h)| u * h).sum();
        let label = if positive { 1.0 } else { 0.0 };
        let g = lr * (label - sigmoidf(score));
        for (d, u) in self.grad.iter_mut().zip(&self.scratch) {
            *d += g * u;
        }
        output.add_row(row as usize, g, &self.hidden);
        let s = f64::from(score);
        if positive {
            softplus(-s)
        } else {
            softplus(s)
        }
    }
}

/// Builds the vocabulary, initialises the model and encodes the corpus.
pub fn prepare<S: AsRef<str>>(
    corpus: &[S],
    hyper: &EmbeddingHyper,
) -> Result<(EmbeddingModel, Vec<Vec<u32>>)> {
    hyper.validate()?;
    let vocab = Vocabulary::build(corpus.iter().map(|s| s.as_ref()), hyper.min_count)?;
    let sentences = encode_corpus(&vocab, corpus);
    let model = EmbeddingModel::init(vocab, hyper.clone())?;
    Ok((model, sentences))
}

pub fn noise_table(vocab: &Vocabulary) -> NoiseTable {
    let counts: Vec<u64> = vocab.words().iter().map(|(_, c)| *c).collect();
    NoiseTable::new(&counts)
}

/// Generator for the sampling decisions of worker `worker`.
pub fn worker_rng(seed: u64, worker: u64) -> Rng {
    rng::derive(seed.wrapping_add(worker), rng::stream::EMBEDDING_TRAIN)
}

/// Single-worker training; bit-reproducible for a fixed seed.
pub fn train<S: AsRef<str>>(
    corpus: &[S],
    hyper: &EmbeddingHyper,
) -> Result<(EmbeddingModel, TrainReport)> {
    let (mut model, sentences) = prepare(corpus, hyper)?;
    let mut report = TrainReport::default();
    if hyper.epochs == 0 {
        return Ok((model, report));
    }
    let vocab = model.vocab().clone();
    let noise = noise_table(&vocab);
    let schedule = Schedule::new(hyper.lr0, hyper.epochs as u64 * vocab.total_tokens());
    let hyper = model.hyper().clone();
    {
        let (subwords, input, output) = model.parts_mut();
        let mut trainer = Trainer::new(&hyper, &vocab, subwords, &noise, worker_rng(hyper.seed, 0));
        let mut visits = 0u64;
        for _ in 0..hyper.epochs {
            let mut stats = LossStats::default();
            for sent in &sentences {
                stats += trainer.sentence(sent, input, output, &schedule, visits);
                visits += sent.len() as u64;
            }
            report.epoch_loss.push(stats.mean());
        }
    }
    model.refresh_fingerprint();
    Ok((model, report))
}
