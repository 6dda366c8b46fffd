//! Binary model files and the plain-text vector export.
//!
//! All binary files start with a four-byte magic and a little-endian `u32`
//! version. Lengths and counts are `u64`, strings are length-prefixed UTF-8.

mod baseline;
mod classifier;
mod embedding;

pub use baseline::{load_baseline, read_baseline, save_baseline, write_baseline, BASELINE_MAGIC};
pub use classifier::{load_classifier, read_classifier, save_classifier, write_classifier, CLASSIFIER_MAGIC};
pub use embedding::{
    export_vectors, load_embedding, read_embedding, save_embedding, write_embedding, EMBEDDING_MAGIC,
};

pub const FORMAT_VERSION: u32 = 1;
