use alloc::string::{String, ToString};
use alloc::vec::Vec;

use hashbrown::HashMap;

use super::vocab::check_token;
use crate::{Error, Result};

/// A pre-segmented document and its label ids (sorted, distinct).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub tokens: Vec<String>,
    pub labels: Vec<usize>,
}

impl Document {
    /// Builds a document from space-separated text. Label ids are sorted and
    /// deduplicated.
    pub fn new(text: &str, mut labels: Vec<usize>) -> Result<Self> {
        let tokens = text
            .split_whitespace()
            .map(|t| check_token(t).map(|_| t.to_string()))
            .collect::<Result<Vec<_>>>()?;
        labels.sort_unstable();
        labels.dedup();
        Ok(Document { tokens, labels })
    }
}

/// Label names with dense ids assigned in first-seen order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelCatalog {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl LabelCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut cat = Self::new();
        for n in names {
            cat.intern(&n.into());
        }
        cat
    }

    /// Id of `name`, registering it if unseen.
    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Checks the label-count contract of a task: exactly one label per document
/// for multi-class data, at least one for multi-label data.
pub fn check_labels(docs: &[Document], single_label: bool) -> Result<()> {
    for (i, d) in docs.iter().enumerate() {
        let ok = if single_label {
            d.labels.len() == 1
        } else {
            !d.labels.is_empty()
        };
        if !ok {
            return Err(Error::InvalidInput(alloc::format!(
                "document {i} has {} labels, expected {}",
                d.labels.len(),
                if single_label { "exactly 1" } else { "at least 1" }
            )));
        }
    }
    Ok(())
}
