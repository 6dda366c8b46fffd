//! Lock-free multi-threaded embedding training.
//!
//! Workers share the input and output matrices and update rows without
//! synchronisation. Concurrent updates to the same row may lose increments,
//! so runs with more than one thread are not reproducible. With one thread
//! this defers to the deterministic single-worker trainer.

use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};

use khtext_core::embedding::{
    noise_table, prepare, train, worker_rng, EmbeddingHyper, EmbeddingModel, LossStats, Matrix, RowStore, Schedule,
    TrainReport, Trainer,
};

use crate::Result;

/// Row-major matrix of `f32` values stored as atomic bit patterns.
pub struct SharedMatrix {
    cols: usize,
    data: Vec<AtomicU32>,
}

impl SharedMatrix {
    pub fn from_matrix(m: Matrix) -> Self {
        let cols = m.cols();
        let data = m.into_vec().into_iter().map(|v| AtomicU32::new(v.to_bits())).collect();
        SharedMatrix { cols, data }
    }

    pub fn into_matrix(self) -> Matrix {
        let rows = if self.cols == 0 { 0 } else { self.data.len() / self.cols };
        let data = self.data.into_iter().map(|v| f32::from_bits(v.into_inner())).collect();
        Matrix::from_vec(rows, self.cols, data)
    }

    fn row(&self, row: usize) -> &[AtomicU32] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }
}

impl RowStore for &SharedMatrix {
    fn dim(&self) -> usize {
        self.cols
    }

    fn read_row(&self, row: usize, out: &mut [f32]) {
        for (o, v) in out.iter_mut().zip(self.row(row)) {
            *o = f32::from_bits(v.load(Ordering::Relaxed));
        }
    }

    fn add_row(&mut self, row: usize, alpha: f32, x: &[f32]) {
        for (v, d) in self.row(row).iter().zip(x) {
            let cur = f32::from_bits(v.load(Ordering::Relaxed));
            v.store((cur + alpha * d).to_bits(), Ordering::Relaxed);
        }
    }
}

/// Trains with `threads` workers, each taking a contiguous share of the
/// sentences every epoch. The learning rate follows a shared progress counter.
pub fn train_parallel<S: AsRef<str> + Sync>(
    corpus: &[S],
    hyper: &EmbeddingHyper,
    threads: usize,
) -> Result<(EmbeddingModel, TrainReport)> {
    if threads <= 1 {
        return Ok(train(corpus, hyper)?);
    }
    let (model, sentences) = prepare(corpus, hyper)?;
    let mut report = TrainReport::default();
    if hyper.epochs == 0 {
        return Ok((model, report));
    }
    let subwords = model.subword_rows().to_vec();
    let (vocab, hyper, input, output) = model.into_parts();
    let noise = noise_table(&vocab);
    let schedule = Schedule::new(hyper.lr0, hyper.epochs as u64 * vocab.total_tokens());
    let input = SharedMatrix::from_matrix(input);
    let output = SharedMatrix::from_matrix(output);
    let visits = AtomicU64::new(0);
    let threads = threads.min(sentences.len()).max(1);
    let share = sentences.len().div_ceil(threads);
    let mut trainers: Vec<Trainer> = (0..threads)
        .map(|w| Trainer::new(&hyper, &vocab, &subwords, &noise, worker_rng(hyper.seed, w as u64)))
        .collect();

    for _ in 0..hyper.epochs {
        let stats: Vec<LossStats> = std::thread::scope(|s| {
            let handles: Vec<_> = trainers
                .iter_mut()
                .zip(sentences.chunks(share))
                .map(|(trainer, chunk)| {
                    let (input, output, visits, schedule) = (&input, &output, &visits, &schedule);
                    s.spawn(move || {
                        let (mut inp, mut out) = (input, output);
                        let mut stats = LossStats::default();
                        for sent in chunk {
                            let seen = visits.fetch_add(sent.len() as u64, Ordering::Relaxed);
                            stats += trainer.sentence(sent, &mut inp, &mut out, schedule, seen);
                        }
                        stats
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("training worker panicked")).collect()
        });
        let mut total = LossStats::default();
        for s in stats {
            total += s;
        }
        report.epoch_loss.push(total.mean());
    }
    drop(trainers);
    let model = EmbeddingModel::from_parts(vocab, hyper, input.into_matrix(), output.into_matrix())?;
    Ok((model, report))
}
