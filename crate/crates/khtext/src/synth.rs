//! Seeded synthetic data: labelled keyword datasets and co-occurrence corpora.

use khtext_core::rng::{self, stream, Rng};
use khtext_core::textproc::{Document, LabelCatalog};
use khtext_core::Task;

use crate::dataset::Dataset;
use crate::{Error, Result};

const CONSONANTS: [char; 33] = [
    'ក', 'ខ', 'គ', 'ឃ', 'ង', 'ច', 'ឆ', 'ជ', 'ឈ', 'ញ', 'ដ', 'ឋ', 'ឌ', 'ឍ', 'ណ', 'ត', 'ថ', 'ទ', 'ធ', 'ន', 'ប', 'ផ', 'ព',
    'ភ', 'ម', 'យ', 'រ', 'ល', 'វ', 'ស', 'ហ', 'ឡ', 'អ',
];
const VOWELS: [char; 8] = ['\u{17B6}', '\u{17B7}', '\u{17B8}', '\u{17BB}', '\u{17BC}', '\u{17C1}', '\u{17C2}', '\u{17C4}'];

#[derive(Clone, Debug, PartialEq)]
pub struct SynthConfig {
    pub k: usize,
    pub docs_per_class: usize,
    pub vocab_per_class: usize,
    /// Probability that a token comes from the shared pool.
    pub overlap_ratio: f64,
    pub task: Task,
    pub seed: u64,
    pub doc_len: usize,
    /// Extra documents per class drawn from the same vocabularies for a
    /// held-out set.
    pub holdout_per_class: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            k: 7,
            docs_per_class: 200,
            vocab_per_class: 50,
            overlap_ratio: 0.3,
            task: Task::Multiclass,
            seed: 0,
            doc_len: 20,
            holdout_per_class: 0,
        }
    }
}

/// `n` distinct Khmer-looking words of two to four syllables.
pub fn distinct_words(r: &mut Rng, n: usize) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let syllables = 2 + rng::below(r, 3);
        let w: String = (0..syllables)
            .flat_map(|_| [CONSONANTS[rng::below(r, CONSONANTS.len())], VOWELS[rng::below(r, VOWELS.len())]])
            .collect();
        if seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

/// Documents whose tokens come mostly from the keyword vocabularies of their
/// labels and otherwise from a pool shared by all classes. Multi-label
/// documents carry one to three labels and mix their vocabularies.
///
/// Returns the main set and the held-out set (empty unless
/// `holdout_per_class` is set).
pub fn synth_dataset(cfg: &SynthConfig) -> Result<(Dataset, Dataset)> {
    if cfg.k < 2 {
        return Err(Error::Config(format!("synth needs k >= 2, got {}", cfg.k)));
    }
    if !(0.0..1.0).contains(&cfg.overlap_ratio) {
        return Err(Error::Config(format!("overlap ratio must be in [0, 1), got {}", cfg.overlap_ratio)));
    }
    if cfg.docs_per_class == 0 || cfg.vocab_per_class == 0 || cfg.doc_len == 0 {
        return Err(Error::Config("docs per class, vocabulary per class and document length must be positive".into()));
    }
    let mut r = rng::derive(cfg.seed, stream::SYNTH);
    let words = distinct_words(&mut r, (cfg.k + 1) * cfg.vocab_per_class);
    let mut pools = words.chunks(cfg.vocab_per_class);
    let own: Vec<&[String]> = (0..cfg.k).map(|_| pools.next().expect("k + 1 pools")).collect();
    let shared = pools.next().expect("k + 1 pools");

    let labels = LabelCatalog::from_names((0..cfg.k).map(|c| format!("class{c}")));
    let mut docs = Vec::with_capacity(cfg.k * cfg.docs_per_class);
    for _ in 0..cfg.docs_per_class + cfg.holdout_per_class {
        for c in 0..cfg.k {
            let mut set = vec![c];
            if cfg.task == Task::Multilabel {
                let extra = rng::below(&mut r, 3);
                while set.len() < 1 + extra {
                    let l = rng::below(&mut r, cfg.k);
                    if !set.contains(&l) {
                        set.push(l);
                    }
                }
            }
            let tokens: Vec<&str> = (0..cfg.doc_len)
                .map(|_| {
                    if rng::uniform(&mut r, 0.0, 1.0) < cfg.overlap_ratio {
                        shared[rng::below(&mut r, shared.len())].as_str()
                    } else {
                        let pool = own[set[rng::below(&mut r, set.len())]];
                        pool[rng::below(&mut r, pool.len())].as_str()
                    }
                })
                .collect();
            docs.push(Document::new(&tokens.join(" "), set)?);
        }
    }
    let test = docs.split_off(cfg.k * cfg.docs_per_class);
    Ok((
        Dataset {
            docs,
            labels: labels.clone(),
        },
        Dataset { docs: test, labels },
    ))
}

/// Two disjoint token families; every sentence draws from one family only.
/// Returns the corpus and the two families.
pub fn two_family_corpus(
    sentences: usize,
    family_size: usize,
    sentence_len: usize,
    seed: u64,
) -> (Vec<String>, [Vec<String>; 2]) {
    let mut r = rng::derive(seed, stream::SYNTH);
    let words = distinct_words(&mut r, 2 * family_size);
    let families = [words[..family_size].to_vec(), words[family_size..].to_vec()];
    let corpus = (0..sentences)
        .map(|i| {
            let fam = &families[i % 2];
            (0..sentence_len).map(|_| fam[rng::below(&mut r, fam.len())].as_str()).collect::<Vec<_>>().join(" ")
        })
        .collect();
    (corpus, families)
}
