//! Files, datasets, multi-threaded embedding training and the `khtext`
//! command line, built on [`khtext_core`].

mod binio;
pub mod cli;
pub mod dataset;
mod error;
pub mod formats;
pub mod hogwild;
pub mod synth;

pub use error::{Error, Result};
pub use khtext_core as core;
