use std::path::Path;

use khtext_core::classifiers::{ClassifierConfig, ClassifierModel, TokenTable, Weights};
use khtext_core::nn::{Parameters, Tensor};
use khtext_core::textproc::LabelCatalog;

use super::FORMAT_VERSION;
use crate::binio::{read_file, write_file, Decoder, Encoder};
use crate::{Error, Result};

pub const CLASSIFIER_MAGIC: &str = "KTXC";
const KIND: &str = "classifier";

fn put_tensor(e: &mut Encoder, t: &Tensor) {
    e.len(t.shape().len());
    for &s in t.shape() {
        e.len(s);
    }
    e.f64s(t.data());
}

fn get_tensor(d: &mut Decoder) -> Result<Tensor> {
    let rank = d.count(8)?;
    let shape = (0..rank).map(|_| d.usize()).collect::<Result<Vec<_>>>()?;
    let n = shape
        .iter()
        .try_fold(1usize, |a, &s| a.checked_mul(s))
        .ok_or_else(|| d.corrupt(format!("tensor shape {shape:?} overflows")))?;
    let data = d.f64s(n)?;
    Ok(Tensor::from_vec(&shape, data)?)
}

/// Layout: configuration as a JSON string, label names, embedding
/// fingerprint, weight tensors in parameter order, optional token table.
pub fn write_classifier(model: &ClassifierModel) -> Vec<u8> {
    let mut e = Encoder::new(b"KTXC", FORMAT_VERSION);
    e.str(&serde_json::to_string(&model.config).expect("config serialises"));
    e.len(model.labels.len());
    for name in model.labels.names() {
        e.str(name);
    }
    e.u64(model.embedding);
    let tensors = model.weights.tensors();
    e.len(tensors.len());
    for t in tensors {
        put_tensor(&mut e, t);
    }
    match &model.token_table {
        Some(table) => {
            e.u8(1);
            e.len(table.tokens().len());
            for t in table.tokens() {
                e.str(t);
            }
            put_tensor(&mut e, &table.vectors);
        }
        None => e.u8(0),
    }
    e.finish()
}

pub fn read_classifier(bytes: &[u8]) -> Result<ClassifierModel> {
    let mut d = Decoder::new(bytes, CLASSIFIER_MAGIC, FORMAT_VERSION, KIND)?;
    let json = d.str()?;
    let config: ClassifierConfig =
        serde_json::from_str(&json).map_err(|e| d.corrupt(format!("configuration: {e}")))?;
    config.validate()?;
    let n = d.count(8)?;
    let names = (0..n).map(|_| d.str()).collect::<Result<Vec<_>>>()?;
    let labels = LabelCatalog::from_names(names);
    if labels.len() != n {
        return Err(d.corrupt("duplicate label names"));
    }
    let embedding = d.u64()?;
    let mut weights = Weights::zeros(&config.arch, config.dim, config.k);
    let n = d.usize()?;
    if n != weights.tensors().len() {
        return Err(d.corrupt(format!("expected {} tensors, found {n}", weights.tensors().len())));
    }
    for slot in weights.tensors_mut() {
        let t = get_tensor(&mut d)?;
        if t.shape() != slot.shape() {
            return Err(d.corrupt(format!("tensor shape {:?}, expected {:?}", t.shape(), slot.shape())));
        }
        *slot = t;
    }
    let token_table = if d.flag()? {
        let n = d.count(8)?;
        let tokens = (0..n).map(|_| d.str()).collect::<Result<Vec<_>>>()?;
        let vectors = get_tensor(&mut d)?;
        Some(TokenTable::new(tokens, vectors)?)
    } else {
        None
    };
    d.finish()?;
    ClassifierModel::new(config, weights, labels, embedding, token_table).map_err(|e| Error::Corrupt {
        kind: KIND,
        msg: e.to_string(),
    })
}

pub fn save_classifier(model: &ClassifierModel, path: &Path) -> Result<()> {
    write_file(path, &write_classifier(model))
}

pub fn load_classifier(path: &Path) -> Result<ClassifierModel> {
    read_classifier(&read_file(path)?)
}
