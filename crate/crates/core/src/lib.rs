//! Subword-aware word embeddings and neural text classification for
//! unsegmented, low-resource scripts such as Khmer.
//!
//! The crate is `no_std` (it needs `alloc`) and carries only the algorithms:
//!
//! * [`textproc`]: Khmer character clusters, subword n-grams, hashing, vocabularies.
//! * [`embedding`]: CBOW / skipgram training with negative sampling, lookups, PCA.
//! * [`nn`]: the handful of differentiable layers the classifiers need.
//! * [`classifiers`]: linear, bidirectional-LSTM and CNN document classifiers.
//! * [`baseline`]: TF-IDF features with a one-vs-rest linear SVM.
//! * [`evalkit`]: precision / recall / F1 for multi-class and multi-label tasks.
//!
//! File formats, dataset loading, parallel training and the command line live
//! in the `khtext` crate.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod baseline;
pub mod classifiers;
pub mod embedding;
mod error;
pub mod evalkit;
pub(crate) mod math;
pub mod nn;
pub mod rng;
mod task;
pub mod textproc;

pub use error::{Error, Result};
pub use task::Task;
