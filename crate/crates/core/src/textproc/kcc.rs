//! Khmer character cluster (KCC) segmentation.
//!
//! A cluster starting with a base letter takes the base, any number of
//! COENG + letter pairs (subscript consonants), then any number of dependent
//! vowels and signs. Every other codepoint, Khmer or not, is its own cluster.

use alloc::vec::Vec;

pub const COENG: char = '\u{17D2}';

/// Base letters: consonants and independent vowels.
#[inline]
pub fn is_base(c: char) -> bool {
    ('\u{1780}'..='\u{17B3}').contains(&c)
}

/// Dependent vowels, diacritics and signs that attach to the preceding base.
#[inline]
pub fn is_dependent(c: char) -> bool {
    ('\u{17B6}'..='\u{17D1}').contains(&c) || c == '\u{17D3}' || c == '\u{17DD}'
}

#[inline]
pub fn is_khmer(c: char) -> bool {
    ('\u{1780}'..='\u{17FF}').contains(&c) || ('\u{19E0}'..='\u{19FF}').contains(&c)
}

/// Iterator over the clusters of a string, as borrowed slices.
#[derive(Clone, Debug)]
pub struct Clusters<'a> {
    rest: &'a str,
}

impl<'a> Iterator for Clusters<'a> {
    type Item = &'a str;

    fn next(&mut self) -> Option<&'a str> {
        let s = self.rest;
        let first = s.chars().next()?;
        let mut end = first.len_utf8();
        if is_base(first) {
            // subscript consonants
            loop {
                let mut look = s[end..].chars();
                match (look.next(), look.next()) {
                    (Some(COENG), Some(sub)) if is_base(sub) => {
                        end += COENG.len_utf8() + sub.len_utf8();
                    }
                    _ => break,
                }
            }
            for c in s[end..].chars() {
                if !is_dependent(c) {
                    break;
                }
                end += c.len_utf8();
            }
        }
        let (head, tail) = s.split_at(end);
        self.rest = tail;
        Some(head)
    }
}

/// Splits `text` into Khmer character clusters.
///
/// Concatenating the returned slices reproduces `text` exactly.
pub fn clusters(text: &str) -> Clusters<'_> {
    Clusters { rest: text }
}

pub fn kcc_split(text: &str) -> Vec<&str> {
    clusters(text).collect()
}

/// Whether `cluster` is a well-formed cluster: either a single codepoint or
/// a base letter followed by COENG + letter pairs and then dependent signs.
pub fn is_well_formed(cluster: &str) -> bool {
    let mut chars = cluster.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    let rest: Vec<char> = chars.collect();
    if rest.is_empty() {
        return true;
    }
    if !is_base(first) {
        return false;
    }
    let mut i = 0;
    while i + 1 < rest.len() && rest[i] == COENG && is_base(rest[i + 1]) {
        i += 2;
    }
    rest[i..].iter().all(|&c| is_dependent(c))
}
