//! Text preprocessing: Khmer character clusters, subword n-grams and their
//! hashing, vocabularies, documents.

mod document;
pub mod hash;
pub mod kcc;
mod ngram;
mod vocab;

pub use document::{check_labels, Document, LabelCatalog};
pub use hash::{fnv1a32, hash_ngram};
pub use kcc::{clusters, kcc_split};
pub use ngram::{
    extract_ngrams, ngram_buckets, unit_count, SubwordConfig, Unit, BOW, DEFAULT_BUCKETS, EOW,
};
pub use vocab::{check_token, Vocabulary};
