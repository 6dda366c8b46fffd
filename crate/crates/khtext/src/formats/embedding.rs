use std::io::Write;
use std::path::Path;

use khtext_core::embedding::{EmbeddingHyper, EmbeddingModel, Matrix, Mode};
use khtext_core::textproc::{SubwordConfig, Unit, Vocabulary};

use super::FORMAT_VERSION;
use crate::binio::{read_file, write_file, Decoder, Encoder};
use crate::{Error, Result};

pub const EMBEDDING_MAGIC: &str = "KTXE";
const KIND: &str = "embedding";

/// Serialises hyperparameters, vocabulary, input and output matrices.
pub fn write_embedding(model: &EmbeddingModel) -> Vec<u8> {
    let mut e = Encoder::new(b"KTXE", FORMAT_VERSION);
    let h = model.hyper();
    e.len(h.dim);
    e.len(h.window);
    e.len(h.negatives);
    e.len(h.epochs);
    e.f32(h.lr0);
    e.u8(match h.mode {
        Mode::Cbow => 0,
        Mode::Skipgram => 1,
    });
    e.len(h.subword.minn);
    e.len(h.subword.maxn);
    e.u64(h.subword.buckets);
    e.u8(match h.subword.unit {
        Unit::Codepoint => 0,
        Unit::Kcc => 1,
    });
    e.u64(h.min_count);
    match h.subsample {
        Some(t) => {
            e.u8(1);
            e.f64(t);
        }
        None => {
            e.u8(0);
            e.f64(0.0);
        }
    }
    e.u64(h.seed);

    let v = model.vocab();
    e.len(v.len());
    for (w, c) in v.words() {
        e.str(w);
        e.u64(*c);
    }
    e.u64(v.min_count());
    e.u64(v.total_tokens());

    for m in [model.input_matrix(), model.output_matrix()] {
        e.len(m.rows());
        e.len(m.cols());
        e.f32s(m.as_slice());
    }
    e.finish()
}

pub fn read_embedding(bytes: &[u8]) -> Result<EmbeddingModel> {
    let mut d = Decoder::new(bytes, EMBEDDING_MAGIC, FORMAT_VERSION, KIND)?;
    let dim = d.usize()?;
    let window = d.usize()?;
    let negatives = d.usize()?;
    let epochs = d.usize()?;
    let lr0 = d.f32()?;
    let mode = match d.u8()? {
        0 => Mode::Cbow,
        1 => Mode::Skipgram,
        v => return Err(d.corrupt(format!("unknown mode tag {v}"))),
    };
    let minn = d.usize()?;
    let maxn = d.usize()?;
    let buckets = d.u64()?;
    let unit = match d.u8()? {
        0 => Unit::Codepoint,
        1 => Unit::Kcc,
        v => return Err(d.corrupt(format!("unknown unit tag {v}"))),
    };
    let min_count = d.u64()?;
    let has_subsample = d.flag()?;
    let threshold = d.f64()?;
    let seed = d.u64()?;
    let hyper = EmbeddingHyper {
        dim,
        window,
        negatives,
        epochs,
        lr0,
        mode,
        subword: SubwordConfig {
            minn,
            maxn,
            buckets,
            unit,
        },
        min_count,
        subsample: has_subsample.then_some(threshold),
        seed,
    };

    let n = d.count(16)?;
    let mut words = Vec::with_capacity(n);
    for _ in 0..n {
        let w = d.str()?;
        let c = d.u64()?;
        words.push((w, c));
    }
    let vocab_min = d.u64()?;
    let total = d.u64()?;
    let vocab = Vocabulary::from_parts(words, vocab_min, total);

    let mut matrices = Vec::with_capacity(2);
    for _ in 0..2 {
        let rows = d.usize()?;
        let cols = d.usize()?;
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| d.corrupt(format!("matrix shape {rows}x{cols} overflows")))?;
        matrices.push(Matrix::from_vec(rows, cols, d.f32s(len)?));
    }
    d.finish()?;
    let output = matrices.pop().expect("two matrices");
    let input = matrices.pop().expect("two matrices");
    EmbeddingModel::from_parts(vocab, hyper, input, output).map_err(|e| Error::Corrupt {
        kind: KIND,
        msg: e.to_string(),
    })
}

pub fn save_embedding(model: &EmbeddingModel, path: &Path) -> Result<()> {
    write_file(path, &write_embedding(model))
}

pub fn load_embedding(path: &Path) -> Result<EmbeddingModel> {
    read_embedding(&read_file(path)?)
}

/// Text export: a `<vocab_size> <m>` header, then each vocabulary token
/// followed by its word vector.
pub fn export_vectors<W: Write + ?Sized>(model: &EmbeddingModel, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "{} {}", model.vocab().len(), model.dim())?;
    for id in 0..model.vocab().len() as u32 {
        write!(out, "{}", model.vocab().token(id))?;
        for v in model.id_vector(id) {
            write!(out, " {v}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}
