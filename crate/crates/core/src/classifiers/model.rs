use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::HashMap;

use super::arch::{forward, Weights};
use super::config::ClassifierConfig;
use super::vectorize::{vectorize_with, DocMatrix, WordVectors};
use crate::nn::{sigmoid, softmax, Parameters, Tensor};
use crate::textproc::{Document, LabelCatalog};
use crate::{Error, Result, Task};

/// Per-token word vectors updated during fine-tuning. Tokens not in the
/// table fall back to the frozen embedding.
#[derive(Clone, Debug, PartialEq)]
pub struct TokenTable {
    index: HashMap<String, usize>,
    tokens: Vec<String>,
    pub vectors: Tensor,
}

impl TokenTable {
    pub fn new(tokens: Vec<String>, vectors: Tensor) -> Result<Self> {
        if vectors.rows() != tokens.len() {
            return Err(Error::ShapeMismatch {
                op: "token table",
                expected: alloc::format!("{} rows", tokens.len()),
                found: alloc::format!("{}", vectors.rows()),
            });
        }
        let index = tokens.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Ok(TokenTable {
            index,
            tokens,
            vectors,
        })
    }

    pub fn id(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }
}

/// Labels chosen for a document plus the per-label probabilities (softmax
/// for multi-class, independent sigmoids for multi-label).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Prediction {
    pub labels: Vec<usize>,
    pub probabilities: Vec<f64>,
}

/// Probability of a label that multi-label prediction must reach.
pub const MULTILABEL_THRESHOLD: f64 = 0.5;

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

/// Turns raw scores into a prediction. Multi-class takes the most probable
/// label (lowest id on ties); multi-label takes every label at or above the
/// threshold, or the single most probable one when none is.
pub fn decide(task: Task, scores: &[f64]) -> Prediction {
    match task {
        Task::Multiclass => {
            let probabilities = softmax(scores);
            Prediction {
                labels: alloc::vec![argmax(&probabilities)],
                probabilities,
            }
        }
        Task::Multilabel => {
            let probabilities = sigmoid(scores);
            let mut labels: Vec<usize> = probabilities
                .iter()
                .enumerate()
                .filter(|(_, &p)| p >= MULTILABEL_THRESHOLD)
                .map(|(i, _)| i)
                .collect();
            if labels.is_empty() {
                labels.push(argmax(&probabilities));
            }
            Prediction {
                labels,
                probabilities,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifierModel {
    pub config: ClassifierConfig,
    pub weights: Weights,
    pub labels: LabelCatalog,
    /// Fingerprint of the embedding the model was trained with.
    pub embedding: u64,
    pub token_table: Option<TokenTable>,
}

impl ClassifierModel {
    /// Checks weight shapes against the configuration.
    pub fn new(
        config: ClassifierConfig,
        weights: Weights,
        labels: LabelCatalog,
        embedding: u64,
        token_table: Option<TokenTable>,
    ) -> Result<Self> {
        config.validate()?;
        let expected = Weights::zeros(&config.arch, config.dim, config.k);
        let shapes = |w: &Weights| w.tensors().iter().map(|t| t.shape().to_vec()).collect::<Vec<_>>();
        if shapes(&expected) != shapes(&weights) {
            return Err(Error::ShapeMismatch {
                op: "classifier",
                expected: alloc::format!("{:?}", shapes(&expected)),
                found: alloc::format!("{:?}", shapes(&weights)),
            });
        }
        if labels.len() != config.k {
            return Err(Error::InvalidConfig(alloc::format!(
                "label catalog has {} entries for k = {}",
                labels.len(),
                config.k
            )));
        }
        if let Some(t) = &token_table {
            if t.vectors.cols() != config.dim {
                return Err(Error::ShapeMismatch {
                    op: "token table",
                    expected: alloc::format!("{} columns", config.dim),
                    found: alloc::format!("{}", t.vectors.cols()),
                });
            }
        }
        Ok(ClassifierModel {
            config,
            weights,
            labels,
            embedding,
            token_table,
        })
    }

    /// Trainable scalars, word vectors excluded.
    pub fn num_parameters(&self) -> usize {
        self.weights.num_parameters()
    }

    pub fn check_embedding<E: WordVectors + ?Sized>(&self, emb: &E) -> Result<()> {
        if emb.fingerprint() != self.embedding {
            return Err(Error::EmbeddingMismatch {
                expected: self.embedding,
                found: emb.fingerprint(),
            });
        }
        Ok(())
    }

    /// Document matrix using fine-tuned vectors where available.
    pub fn vectorize<E: WordVectors + ?Sized>(&self, doc: &Document, emb: &E) -> Result<DocMatrix> {
        vectorize_with(
            doc,
            &self.config,
            |t| match self.token_table.as_ref().and_then(|tt| tt.id(t).map(|i| (tt, i))) {
                Some((tt, i)) => Ok(tt.vectors.row(i).to_vec()),
                None => Ok(emb.vector(t)?.into_iter().map(f64::from).collect()),
            },
            emb.dim(),
        )
    }

    /// Raw scores of an already vectorised document.
    pub fn forward(&self, x: &DocMatrix) -> Result<Vec<f64>> {
        Ok(forward(&self.weights, x, self.config.dropout, None)?.0)
    }

    pub fn scores<E: WordVectors + ?Sized>(&self, doc: &Document, emb: &E) -> Result<Vec<f64>> {
        self.check_embedding(emb)?;
        self.forward(&self.vectorize(doc, emb)?)
    }

    pub fn predict<E: WordVectors + ?Sized>(&self, doc: &Document, emb: &E) -> Result<Prediction> {
        Ok(decide(self.config.task, &self.scores(doc, emb)?))
    }
}
