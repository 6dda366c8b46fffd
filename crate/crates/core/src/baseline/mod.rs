//! Bag-of-words reference pipeline: TF-IDF features and a one-vs-rest
//! linear SVM.

mod svm;
mod tfidf;

use alloc::vec::Vec;

pub use svm::{objective, train_svm, BinaryPegasos, SvmConfig, SvmHistory, SvmModel};
pub use tfidf::{SparseVec, TfidfVectorizer};

use crate::evalkit::MetricsReport;
use crate::textproc::Document;
use crate::{Result, Task};

/// Fitted vectorizer plus SVM.
#[derive(Clone, Debug, PartialEq)]
pub struct Baseline {
    pub vectorizer: TfidfVectorizer,
    pub svm: SvmModel,
}

impl Baseline {
    pub fn fit(docs: &[Document], task: Task, k: usize, cfg: &SvmConfig) -> Result<(Self, SvmHistory)> {
        crate::textproc::check_labels(docs, task == Task::Multiclass)?;
        let tokens: Vec<&[alloc::string::String]> = docs.iter().map(|d| d.tokens.as_slice()).collect();
        let vectorizer = TfidfVectorizer::fit(&tokens)?;
        let x: Vec<SparseVec> = docs.iter().map(|d| vectorizer.transform(&d.tokens)).collect();
        let y: Vec<Vec<usize>> = docs.iter().map(|d| d.labels.clone()).collect();
        let (svm, history) = train_svm(&x, &y, k, vectorizer.dim(), task, cfg)?;
        Ok((Baseline { vectorizer, svm }, history))
    }

    pub fn predict(&self, doc: &Document) -> Vec<usize> {
        self.svm.predict(&self.vectorizer.transform(&doc.tokens))
    }

    pub fn evaluate(&self, docs: &[Document]) -> Result<MetricsReport> {
        let preds: Vec<Vec<usize>> = docs.iter().map(|d| self.predict(d)).collect();
        crate::classifiers::score_predictions(self.svm.task, self.svm.k(), docs, &preds)
    }
}
