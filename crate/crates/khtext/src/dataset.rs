//! JSON Lines datasets and plain-text corpora.
//!
//! A dataset record is `{"labels": ["..."], "text": "tok tok ..."}`; label
//! strings receive dense ids in first-seen order.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use khtext_core::textproc::{Document, LabelCatalog};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Deserialize, Serialize)]
pub struct Record {
    pub labels: Vec<String>,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub docs: Vec<Document>,
    pub labels: LabelCatalog,
}

/// How label names outside the catalog are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Labels {
    /// Register them.
    Grow,
    /// Reject them.
    Fixed,
}

/// Parses records from `reader`, skipping blank lines. Line numbers in
/// errors are 1-based.
pub fn parse_dataset<R: BufRead>(reader: R, labels: &mut LabelCatalog, mode: Labels) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let fail = |msg: String| Error::Dataset { line: line_no, msg };
        let line = line.map_err(|e| fail(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line).map_err(|e| fail(e.to_string()))?;
        if rec.labels.is_empty() {
            return Err(fail("empty labels array".into()));
        }
        let ids = rec
            .labels
            .iter()
            .map(|name| match mode {
                Labels::Grow => Ok(labels.intern(name)),
                Labels::Fixed => labels.id(name).ok_or_else(|| fail(format!("unknown label {name:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        docs.push(Document::new(&rec.text, ids).map_err(|e| fail(e.to_string()))?);
    }
    Ok(docs)
}

pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut labels = LabelCatalog::new();
    let docs = parse_dataset(BufReader::new(f), &mut labels, Labels::Grow)?;
    Ok(Dataset { docs, labels })
}

/// Loads a dataset whose labels must all appear in `labels`.
pub fn load_dataset_with(path: &Path, labels: &LabelCatalog) -> Result<Vec<Document>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut labels = labels.clone();
    parse_dataset(BufReader::new(f), &mut labels, Labels::Fixed)
}

pub fn write_dataset<W: Write + ?Sized>(docs: &[Document], labels: &LabelCatalog, out: &mut W) -> std::io::Result<()> {
    for d in docs {
        let rec = Record {
            labels: d.labels.iter().map(|&l| labels.name(l).to_string()).collect(),
            text: d.tokens.join(" "),
        };
        serde_json::to_writer(&mut *out, &rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// One sentence per line, blank lines dropped.
pub fn read_corpus(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text.lines().filter(|l| !l.trim().is_empty()).map(str::to_string).collect())
}
