use alloc::format;

use crate::nn::ArchSpec;
use crate::{Error, Result, Task};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Optimizer {
    Adam {
        lr: f64,
        beta1: f64,
        beta2: f64,
        eps: f64,
    },
    Sgd {
        lr: f64,
    },
}

impl Optimizer {
    pub fn adam(lr: f64) -> Self {
        Optimizer::Adam {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

impl Default for Optimizer {
    fn default() -> Self {
        Optimizer::adam(1e-3)
    }
}

/// Fraction of the data held out for model selection when no validation
/// set is given (500 of 13,902 articles).
pub const VALIDATION_FRACTION: f64 = 500.0 / 13_902.0;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassifierConfig {
    pub arch: ArchSpec,
    pub task: Task,
    /// Number of labels.
    pub k: usize,
    /// Word vector dimension.
    pub dim: usize,
    pub dropout: f64,
    pub optimizer: Optimizer,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    /// Documents are truncated to this many tokens.
    pub max_len: usize,
    /// Train a per-token copy of the word vectors alongside the classifier.
    pub fine_tune: bool,
}

impl ClassifierConfig {
    pub fn new(arch: ArchSpec, task: Task, k: usize, dim: usize) -> Self {
        ClassifierConfig {
            arch,
            task,
            k,
            dim,
            dropout: 0.5,
            optimizer: Optimizer::default(),
            epochs: 10,
            batch_size: 32,
            seed: 0,
            max_len: 256,
            fine_tune: false,
        }
    }

    /// Fewest rows a document matrix may have.
    pub fn min_rows(&self) -> usize {
        match &self.arch {
            ArchSpec::Cnn(spec) => spec.max_window(),
            _ => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidConfig(msg));
        match self.task {
            Task::Multiclass if self.k < 2 => return bad(format!("multiclass needs k >= 2, got {}", self.k)),
            Task::Multilabel if self.k < 1 => return bad("multilabel needs k >= 1".into()),
            _ => {}
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return bad(format!("dropout must be in [0, 1), got {}", self.dropout));
        }
        if self.dim == 0 {
            return bad("word vector dimension must be at least 1".into());
        }
        if self.batch_size == 0 {
            return bad("batch size must be at least 1".into());
        }
        match &self.arch {
            ArchSpec::Linear { hidden } | ArchSpec::Birnn { hidden } if *hidden == 0 => {
                return bad("hidden size must be at least 1".into())
            }
            ArchSpec::Cnn(spec) => spec.validate()?,
            _ => {}
        }
        if self.max_len < self.min_rows() {
            return bad(format!(
                "max sequence length {} is below the largest conv window {}",
                self.max_len,
                self.min_rows()
            ));
        }
        let lr = match self.optimizer {
            Optimizer::Adam { lr, .. } | Optimizer::Sgd { lr } => lr,
        };
        if !(lr > 0.0 && lr.is_finite()) {
            return bad(format!("learning rate must be positive, got {lr}"));
        }
        Ok(())
    }
}
