use alloc::vec::Vec;

use super::config::ClassifierConfig;
use crate::embedding::EmbeddingModel;
use crate::nn::Tensor;
use crate::textproc::Document;
use crate::{Error, Result};

/// Source of frozen word vectors.
pub trait WordVectors {
    fn dim(&self) -> usize;
    fn vector(&self, token: &str) -> Result<Vec<f32>>;
    /// Identifies the vectors a classifier was trained against.
    fn fingerprint(&self) -> u64;
}

impl WordVectors for EmbeddingModel {
    fn dim(&self) -> usize {
        EmbeddingModel::dim(self)
    }

    fn vector(&self, token: &str) -> Result<Vec<f32>> {
        Ok(self.word_vector(token)?.values)
    }

    fn fingerprint(&self) -> u64 {
        EmbeddingModel::fingerprint(self)
    }
}

/// A document as a matrix of word vectors, one row per token. Rows past
/// `len` are padding.
#[derive(Clone, Debug, PartialEq)]
pub struct DocMatrix {
    pub rows: Tensor,
    pub len: usize,
}

impl DocMatrix {
    /// Appends zero rows up to `rows` in total.
    pub fn pad_to(&mut self, rows: usize) {
        let have = self.rows.rows();
        if rows <= have {
            return;
        }
        let m = self.rows.cols();
        let mut data = core::mem::replace(&mut self.rows, Tensor::zeros(&[0, m])).into_vec();
        data.resize(rows * m, 0.0);
        self.rows = Tensor::from_vec(&[rows, m], data).expect("padded length");
    }
}

/// Looks up the first `max_len` tokens of `doc`, zero-padding to the
/// architecture's minimum row count.
pub fn vectorize<E: WordVectors + ?Sized>(doc: &Document, emb: &E, cfg: &ClassifierConfig) -> Result<DocMatrix> {
    vectorize_with(doc, cfg, |t| {
        Ok(emb.vector(t)?.into_iter().map(f64::from).collect())
    }, emb.dim())
}

pub(crate) fn vectorize_with(
    doc: &Document,
    cfg: &ClassifierConfig,
    mut lookup: impl FnMut(&str) -> Result<Vec<f64>>,
    dim: usize,
) -> Result<DocMatrix> {
    if doc.tokens.is_empty() {
        return Err(Error::InvalidInput("document has no tokens".into()));
    }
    if dim != cfg.dim {
        return Err(Error::ShapeMismatch {
            op: "vectorize",
            expected: alloc::format!("{}-dimensional word vectors", cfg.dim),
            found: alloc::format!("{dim}"),
        });
    }
    let len = doc.tokens.len().min(cfg.max_len);
    let rows = len.max(cfg.min_rows());
    let mut data = Vec::with_capacity(rows * dim);
    for tok in &doc.tokens[..len] {
        data.extend(lookup(tok)?);
    }
    data.resize(rows * dim, 0.0);
    Ok(DocMatrix {
        rows: Tensor::from_vec(&[rows, dim], data)?,
        len,
    })
}
