use std::path::Path;

use khtext_core::baseline::{Baseline, SvmModel, TfidfVectorizer};
use khtext_core::textproc::LabelCatalog;
use khtext_core::Task;

use super::FORMAT_VERSION;
use crate::binio::{read_file, write_file, Decoder, Encoder};
use crate::Result;

pub const BASELINE_MAGIC: &str = "KTXB";
const KIND: &str = "baseline";

/// Layout: task, label names, vocabulary with idf weights, then one weight
/// row and bias per label.
pub fn write_baseline(model: &Baseline, labels: &LabelCatalog) -> Vec<u8> {
    let mut e = Encoder::new(b"KTXB", FORMAT_VERSION);
    e.u8(match model.svm.task {
        Task::Multiclass => 0,
        Task::Multilabel => 1,
    });
    e.f64(model.svm.lambda);
    e.len(model.svm.epochs);
    e.len(labels.len());
    for name in labels.names() {
        e.str(name);
    }
    let v = &model.vectorizer;
    e.len(v.n_docs());
    e.len(v.dim());
    for (t, idf) in v.terms().iter().zip(v.idf()) {
        e.str(t);
        e.f64(*idf);
    }
    for (w, b) in model.svm.weights.iter().zip(&model.svm.bias) {
        e.f64s(w);
        e.f64(*b);
    }
    e.finish()
}

pub fn read_baseline(bytes: &[u8]) -> Result<(Baseline, LabelCatalog)> {
    let mut d = Decoder::new(bytes, BASELINE_MAGIC, FORMAT_VERSION, KIND)?;
    let task = match d.u8()? {
        0 => Task::Multiclass,
        1 => Task::Multilabel,
        v => return Err(d.corrupt(format!("unknown task tag {v}"))),
    };
    let lambda = d.f64()?;
    let epochs = d.usize()?;
    let k = d.count(8)?;
    let names = (0..k).map(|_| d.str()).collect::<Result<Vec<_>>>()?;
    let labels = LabelCatalog::from_names(names);
    if labels.len() != k {
        return Err(d.corrupt("duplicate label names"));
    }
    let n_docs = d.usize()?;
    let dim = d.count(16)?;
    let mut terms = Vec::with_capacity(dim);
    let mut idf = Vec::with_capacity(dim);
    for _ in 0..dim {
        terms.push(d.str()?);
        idf.push(d.f64()?);
    }
    let mut weights = Vec::with_capacity(k);
    let mut bias = Vec::with_capacity(k);
    for _ in 0..k {
        weights.push(d.f64s(dim)?);
        bias.push(d.f64()?);
    }
    d.finish()?;
    let vectorizer = TfidfVectorizer::from_parts(terms, idf, n_docs)?;
    let svm = SvmModel {
        task,
        weights,
        bias,
        lambda,
        epochs,
    };
    Ok((Baseline { vectorizer, svm }, labels))
}

pub fn save_baseline(model: &Baseline, labels: &LabelCatalog, path: &Path) -> Result<()> {
    write_file(path, &write_baseline(model, labels))
}

pub fn load_baseline(path: &Path) -> Result<(Baseline, LabelCatalog)> {
    read_baseline(&read_file(path)?)
}
