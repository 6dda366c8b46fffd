//! Subword n-grams over boundary-marked tokens.

use alloc::string::String;
use alloc::vec::Vec;

use super::hash::hash_ngram;
use super::kcc::clusters;
use crate::{Error, Result};

pub const BOW: &str = "<";
pub const EOW: &str = ">";

/// Segmentation unit that n-gram lengths are counted in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Unit {
    Codepoint,
    Kcc,
}

impl Unit {
    pub fn as_str(self) -> &'static str {
        match self {
            Unit::Codepoint => "codepoint",
            Unit::Kcc => "kcc",
        }
    }
}

impl core::str::FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "codepoint" => Ok(Unit::Codepoint),
            "kcc" => Ok(Unit::Kcc),
            other => Err(Error::InvalidConfig(alloc::format!("unknown unit {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SubwordConfig {
    pub minn: usize,
    pub maxn: usize,
    pub buckets: u64,
    pub unit: Unit,
}

pub const DEFAULT_BUCKETS: u64 = 2_000_000;

impl SubwordConfig {
    /// Defaults for `unit`: clusters are larger than codepoints, so their
    /// n-gram range is shorter.
    pub fn for_unit(unit: Unit) -> Self {
        let (minn, maxn) = match unit {
            Unit::Codepoint => (3, 6),
            Unit::Kcc => (1, 4),
        };
        SubwordConfig {
            minn,
            maxn,
            buckets: DEFAULT_BUCKETS,
            unit,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.minn == 0 || self.minn > self.maxn {
            return Err(Error::InvalidConfig(alloc::format!(
                "need 1 <= minn <= maxn, got minn={} maxn={}",
                self.minn,
                self.maxn
            )));
        }
        if self.buckets == 0 {
            return Err(Error::InvalidConfig("buckets must be at least 1".into()));
        }
        Ok(())
    }
}

impl Default for SubwordConfig {
    fn default() -> Self {
        SubwordConfig::for_unit(Unit::Kcc)
    }
}

/// Splits the marker-wrapped token into units.
fn units(token: &str, unit: Unit) -> Vec<&str> {
    let mut out = Vec::with_capacity(token.len() + 2);
    out.push(BOW);
    match unit {
        Unit::Codepoint => {
            out.extend(token.char_indices().map(|(i, c)| &token[i..i + c.len_utf8()]))
        }
        Unit::Kcc => out.extend(clusters(token)),
    }
    out.push(EOW);
    out
}

/// All n-grams of `<token>` with `minn <= n <= maxn` units, shortest first
/// and left to right within a length. The whole wrapped token is excluded.
pub fn extract_ngrams(token: &str, cfg: &SubwordConfig) -> Result<Vec<String>> {
    if token.is_empty() {
        return Err(Error::InvalidInput("empty token".into()));
    }
    let units = units(token, cfg.unit);
    let len = units.len();
    let mut out = Vec::new();
    for n in cfg.minn..=cfg.maxn.min(len.saturating_sub(1)) {
        for start in 0..=len - n {
            out.push(units[start..start + n].concat());
        }
    }
    Ok(out)
}

/// Bucket ids of the n-grams of `token`, in [`extract_ngrams`] order.
pub fn ngram_buckets(token: &str, cfg: &SubwordConfig) -> Result<Vec<u64>> {
    Ok(extract_ngrams(token, cfg)?
        .iter()
        .map(|g| hash_ngram(g, cfg.buckets))
        .collect())
}

/// Number of units in `token` without boundary markers.
pub fn unit_count(token: &str, unit: Unit) -> usize {
    match unit {
        Unit::Codepoint => token.chars().count(),
        Unit::Kcc => clusters(token).count(),
    }
}
