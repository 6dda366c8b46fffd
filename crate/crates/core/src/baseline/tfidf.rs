use alloc::string::{String, ToString};
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::math::{ln, sqrt};
use crate::{Error, Result};

/// Sparse vector as `(column, value)` pairs sorted by column.
pub type SparseVec = Vec<(u32, f64)>;

/// Term weighting `tf * idf` with raw counts for `tf` and smoothed
/// `idf(t) = ln((1 + N) / (1 + df(t))) + 1`, L2-normalised per document.
#[derive(Clone, Debug, PartialEq)]
pub struct TfidfVectorizer {
    index: HashMap<String, u32>,
    terms: Vec<String>,
    idf: Vec<f64>,
    n_docs: usize,
}

impl TfidfVectorizer {
    /// Columns are assigned in first-appearance order.
    pub fn fit<D, S>(docs: &[D]) -> Result<Self>
    where
        D: AsRef<[S]>,
        S: AsRef<str>,
    {
        if docs.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut index: HashMap<String, u32> = HashMap::new();
        let mut terms = Vec::new();
        let mut df: Vec<u64> = Vec::new();
        let mut last_doc: Vec<usize> = Vec::new();
        for (d, doc) in docs.iter().enumerate() {
            for tok in doc.as_ref() {
                let tok = tok.as_ref();
                let col = match index.get(tok) {
                    Some(&c) => c as usize,
                    None => {
                        let c = terms.len();
                        index.insert(tok.to_string(), c as u32);
                        terms.push(tok.to_string());
                        df.push(0);
                        last_doc.push(usize::MAX);
                        c
                    }
                };
                if last_doc[col] != d {
                    last_doc[col] = d;
                    df[col] += 1;
                }
            }
        }
        let n = docs.len() as f64;
        let idf = df.iter().map(|&f| ln((1.0 + n) / (1.0 + f as f64)) + 1.0).collect();
        Ok(TfidfVectorizer {
            index,
            terms,
            idf,
            n_docs: docs.len(),
        })
    }

    pub fn from_parts(terms: Vec<String>, idf: Vec<f64>, n_docs: usize) -> Result<Self> {
        if terms.len() != idf.len() {
            return Err(Error::ShapeMismatch {
                op: "tfidf",
                expected: alloc::format!("{} idf values", terms.len()),
                found: alloc::format!("{}", idf.len()),
            });
        }
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        Ok(TfidfVectorizer {
            index,
            terms,
            idf,
            n_docs,
        })
    }

    /// Unit-length weighted vector; tokens unseen during fitting are ignored,
    /// so a document of only unseen tokens maps to the zero vector.
    pub fn transform<S: AsRef<str>>(&self, tokens: &[S]) -> SparseVec {
        let mut counts: HashMap<u32, f64> = HashMap::new();
        for t in tokens {
            if let Some(&c) = self.index.get(t.as_ref()) {
                *counts.entry(c).or_insert(0.0) += 1.0;
            }
        }
        let mut v: SparseVec = counts
            .into_iter()
            .map(|(c, tf)| (c, tf * self.idf[c as usize]))
            .collect();
        v.sort_unstable_by_key(|e| e.0);
        let norm = sqrt(v.iter().map(|e| e.1 * e.1).sum());
        if norm > 0.0 {
            v.iter_mut().for_each(|e| e.1 /= norm);
        }
        v
    }

    pub fn column(&self, term: &str) -> Option<u32> {
        self.index.get(term).copied()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn dim(&self) -> usize {
        self.terms.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn hand_values() {
        let docs = vec![vec!["a", "a", "b"], vec!["b", "c"]];
        let v = TfidfVectorizer::fit(&docs).unwrap();
        let idf = v.idf();
        assert!((idf[0] - 1.405465).abs() < 1e-6);
        assert_eq!(idf[1], 1.0);
        assert!((idf[2] - 1.405465).abs() < 1e-6);
        let x = v.transform(&docs[0]);
        assert_eq!(x.len(), 2);
        assert!((x[0].1 - 0.9422).abs() < 1e-4);
        assert!((x[1].1 - 0.3352).abs() < 1e-4);
    }

    #[test]
    fn unseen_tokens_vanish() {
        let v = TfidfVectorizer::fit(&[vec!["a"]]).unwrap();
        assert!(v.transform(&["zz", "yy"]).is_empty());
        assert!(TfidfVectorizer::fit::<Vec<&str>, &str>(&[]).is_err());
    }
}
