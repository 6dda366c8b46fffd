use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::store::{Matrix, RowStore};
use crate::rng;
use crate::textproc::hash::Fnv64;
use crate::textproc::{ngram_buckets, SubwordConfig, Unit, Vocabulary};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Mode {
    Cbow,
    Skipgram,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Cbow => "cbow",
            Mode::Skipgram => "skipgram",
        }
    }
}

impl core::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cbow" => Ok(Mode::Cbow),
            "skipgram" => Ok(Mode::Skipgram),
            other => Err(Error::InvalidConfig(alloc::format!("unknown mode {other:?}"))),
        }
    }
}

/// Embedding training hyperparameters.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EmbeddingHyper {
    pub dim: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub lr0: f32,
    pub mode: Mode,
    pub subword: SubwordConfig,
    pub min_count: u64,
    /// Frequent-word subsampling threshold; `None` disables subsampling.
    pub subsample: Option<f64>,
    pub seed: u64,
}

impl EmbeddingHyper {
    pub fn new(mode: Mode) -> Self {
        EmbeddingHyper {
            dim: 100,
            window: 5,
            negatives: 5,
            epochs: 5,
            lr0: match mode {
                Mode::Cbow => 0.05,
                Mode::Skipgram => 0.025,
            },
            mode,
            subword: SubwordConfig::for_unit(Unit::Kcc),
            min_count: 5,
            subsample: None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.subword.validate()?;
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        if self.dim == 0 {
            return bad("embedding dimension must be at least 1");
        }
        if self.window == 0 {
            return bad("window must be at least 1");
        }
        if self.negatives == 0 {
            return bad("negatives must be at least 1");
        }
        if !(self.lr0 > 0.0 && self.lr0.is_finite()) {
            return bad("learning rate must be positive");
        }
        if let Some(t) = self.subsample {
            if !(t > 0.0) {
                return bad("subsampling threshold must be positive");
            }
        }
        Ok(())
    }
}

impl Default for EmbeddingHyper {
    fn default() -> Self {
        EmbeddingHyper::new(Mode::Cbow)
    }
}

/// Result of a word vector lookup.
#[derive(Clone, Debug, PartialEq)]
pub struct WordVector {
    pub values: Vec<f32>,
    /// Set when the token is out of vocabulary and has no n-grams, so the
    /// vector is all zeros.
    pub empty_fallback: bool,
}

/// Trained (or freshly initialised) subword embedding model.
///
/// Input rows `0..|V|` belong to words, rows `|V|..|V|+buckets` to hashed
/// n-grams. Output rows are word targets only.
#[derive(Clone, Debug)]
pub struct EmbeddingModel {
    vocab: Vocabulary,
    hyper: EmbeddingHyper,
    input: Matrix,
    output: Matrix,
    subwords: Vec<Vec<u32>>,
    fingerprint: u64,
}

impl EmbeddingModel {
    /// Input matrix uniform in `[-1/m, 1/m]`, output matrix zero.
    pub fn init(vocab: Vocabulary, hyper: EmbeddingHyper) -> Result<Self> {
        hyper.validate()?;
        let rows = input_rows(&vocab, &hyper)?;
        let m = hyper.dim;
        let mut rng = rng::derive(hyper.seed, rng::stream::EMBEDDING);
        let bound = 1.0 / m as f64;
        let data = (0..rows * m)
            .map(|_| rng::uniform(&mut rng, -bound, bound) as f32)
            .collect();
        let input = Matrix::from_vec(rows, m, data);
        let output = Matrix::zeros(vocab.len(), m);
        Self::from_parts(vocab, hyper, input, output)
    }

    /// Reassembles a model from its parts, checking shapes and finiteness.
    pub fn from_parts(
        vocab: Vocabulary,
        hyper: EmbeddingHyper,
        input: Matrix,
        output: Matrix,
    ) -> Result<Self> {
        hyper.validate()?;
        let rows = input_rows(&vocab, &hyper)?;
        let shape_err = |what: &'static str, expected: (usize, usize), m: &Matrix| {
            Err(Error::ShapeMismatch {
                op: what,
                expected: alloc::format!("{}x{}", expected.0, expected.1),
                found: alloc::format!("{}x{}", m.rows(), m.cols()),
            })
        };
        if input.rows() != rows || input.cols() != hyper.dim {
            return shape_err("input matrix", (rows, hyper.dim), &input);
        }
        if output.rows() != vocab.len() || output.cols() != hyper.dim {
            return shape_err("output matrix", (vocab.len(), hyper.dim), &output);
        }
        if !input.as_slice().iter().chain(output.as_slice()).all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        let nwords = vocab.len() as u64;
        let subwords = vocab
            .words()
            .iter()
            .enumerate()
            .map(|(id, (w, _))| {
                let mut rows = vec![id as u32];
                rows.extend(
                    ngram_buckets(w, &hyper.subword)
                        .expect("vocabulary tokens are non-empty")
                        .into_iter()
                        .map(|b| (nwords + b) as u32),
                );
                rows
            })
            .collect();
        let fingerprint = fingerprint(&vocab, &hyper, &input);
        Ok(EmbeddingModel {
            vocab,
            hyper,
            input,
            output,
            subwords,
            fingerprint,
        })
    }

    pub fn into_parts(self) -> (Vocabulary, EmbeddingHyper, Matrix, Matrix) {
        (self.vocab, self.hyper, self.input, self.output)
    }

    pub(crate) fn parts_mut(&mut self) -> (&[Vec<u32>], &mut Matrix, &mut Matrix) {
        (&self.subwords, &mut self.input, &mut self.output)
    }

    pub(crate) fn refresh_fingerprint(&mut self) {
        self.fingerprint = fingerprint(&self.vocab, &self.hyper, &self.input);
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn hyper(&self) -> &EmbeddingHyper {
        &self.hyper
    }

    pub fn dim(&self) -> usize {
        self.hyper.dim
    }

    pub fn input_matrix(&self) -> &Matrix {
        &self.input
    }

    pub fn output_matrix(&self) -> &Matrix {
        &self.output
    }

    /// Input rows (word row first, then n-gram rows) of every vocabulary word.
    pub fn subword_rows(&self) -> &[Vec<u32>] {
        &self.subwords
    }

    /// Stable hash of vocabulary, subword settings and input matrix. Two
    /// models with the same fingerprint produce the same word vectors.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Input rows contributing to `token`: the word row and its n-gram rows
    /// when in vocabulary, otherwise the n-gram rows alone.
    pub fn token_rows(&self, token: &str) -> Result<Vec<u32>> {
        if token.is_empty() {
            return Err(Error::InvalidInput("empty token".into()));
        }
        if let Some(id) = self.vocab.id(token) {
            return Ok(self.subwords[id as usize].clone());
        }
        let nwords = self.vocab.len() as u64;
        Ok(ngram_buckets(token, &self.hyper.subword)?
            .into_iter()
            .map(|b| (nwords + b) as u32)
            .collect())
    }

    /// Mean of the token's input rows; zero with `empty_fallback` set for an
    /// out-of-vocabulary token without n-grams.
    pub fn word_vector(&self, token: &str) -> Result<WordVector> {
        let rows = self.token_rows(token)?;
        let mut values = vec![0.0f32; self.dim()];
        if rows.is_empty() {
            return Ok(WordVector {
                values,
                empty_fallback: true,
            });
        }
        mean_rows(&self.input, &rows, &mut values);
        Ok(WordVector {
            values,
            empty_fallback: false,
        })
    }

    /// Word vector of an in-vocabulary id.
    pub fn id_vector(&self, id: u32) -> Vec<f32> {
        let mut values = vec![0.0f32; self.dim()];
        mean_rows(&self.input, &self.subwords[id as usize], &mut values);
        values
    }
}

/// `out = mean of the given rows`.
pub(crate) fn mean_rows<S: RowStore>(store: &S, rows: &[u32], out: &mut [f32]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    let mut scratch = vec![0.0f32; out.len()];
    for &r in rows {
        store.read_row(r as usize, &mut scratch);
        for (o, s) in out.iter_mut().zip(&scratch) {
            *o += s;
        }
    }
    let inv = 1.0 / rows.len() as f32;
    out.iter_mut().for_each(|v| *v *= inv);
}

fn input_rows(vocab: &Vocabulary, hyper: &EmbeddingHyper) -> Result<usize> {
    let rows = vocab.len() as u64 + hyper.subword.buckets;
    if rows > u64::from(u32::MAX) {
        return Err(Error::InvalidConfig(alloc::format!(
            "vocabulary plus buckets ({rows}) exceeds the 32-bit row index"
        )));
    }
    Ok(rows as usize)
}

fn fingerprint(vocab: &Vocabulary, hyper: &EmbeddingHyper, input: &Matrix) -> u64 {
    let mut h = Fnv64::default();
    let sw = &hyper.subword;
    for v in [sw.minn as u64, sw.maxn as u64, sw.buckets, sw.unit as u64, hyper.dim as u64] {
        h.write(&v.to_le_bytes());
    }
    for (w, _) in vocab.words() {
        h.write(&(w.len() as u64).to_le_bytes());
        h.write(w.as_bytes());
    }
    for v in input.as_slice() {
        h.write(&v.to_bits().to_le_bytes());
    }
    h.finish()
}
