use alloc::string::{String, ToString};
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::{Error, Result};

/// Token inventory with frequencies. Ids are dense and ordered by
/// descending count, ties broken by first appearance in the corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct Vocabulary {
    words: Vec<(String, u64)>,
    index: HashMap<String, u32>,
    min_count: u64,
    total_tokens: u64,
}

/// Rejects tokens that would collide with the n-gram boundary markers.
pub fn check_token(token: &str) -> Result<()> {
    if token.contains(['<', '>']) {
        Err(Error::ReservedMarker(token.to_string()))
    } else {
        Ok(())
    }
}

impl Vocabulary {
    /// Counts whitespace-separated tokens over `lines`, keeping those seen at
    /// least `min_count` times.
    pub fn build<I, S>(lines: I, min_count: u64) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        // (count, first position)
        let mut counts: HashMap<String, (u64, usize)> = HashMap::new();
        for line in lines {
            for tok in line.as_ref().split_whitespace() {
                let next = counts.len();
                match counts.get_mut(tok) {
                    Some(entry) => entry.0 += 1,
                    None => {
                        check_token(tok)?;
                        counts.insert(tok.to_string(), (1, next));
                    }
                }
            }
        }
        if counts.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut kept: Vec<(String, u64, usize)> = counts
            .into_iter()
            .filter(|(_, (c, _))| *c >= min_count)
            .map(|(w, (c, first))| (w, c, first))
            .collect();
        if kept.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        kept.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
        let total_tokens = kept.iter().map(|w| w.1).sum();
        let words = kept.into_iter().map(|(w, c, _)| (w, c)).collect();
        Ok(Self::from_parts(words, min_count, total_tokens))
    }

    /// Reassembles a vocabulary from stored parts. `words` must already be
    /// in id order.
    pub fn from_parts(words: Vec<(String, u64)>, min_count: u64, total_tokens: u64) -> Self {
        let index = words
            .iter()
            .enumerate()
            .map(|(i, (w, _))| (w.clone(), i as u32))
            .collect();
        Vocabulary {
            words,
            index,
            min_count,
            total_tokens,
        }
    }

    #[inline]
    pub fn id(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    #[inline]
    pub fn token(&self, id: u32) -> &str {
        &self.words[id as usize].0
    }

    #[inline]
    pub fn count(&self, id: u32) -> u64 {
        self.words[id as usize].1
    }

    pub fn words(&self) -> &[(String, u64)] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    /// Occurrences of retained tokens in the corpus the vocabulary was built from.
    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }
}
