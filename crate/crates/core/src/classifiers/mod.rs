//! Document classifiers over frozen word vectors: mean-of-embeddings with a
//! hidden layer, bidirectional LSTM, and convolution with max-pooling.

mod arch;
mod config;
mod model;
mod train;
mod vectorize;

pub use arch::{backward, forward, Cache, Weights};
pub use config::{ClassifierConfig, Optimizer, VALIDATION_FRACTION};
pub use model::{decide, ClassifierModel, Prediction, TokenTable, MULTILABEL_THRESHOLD};
pub use train::{doc_loss, evaluate, holdout_split, score_predictions, train_classifier, EpochStats, OptimizerState, TrainHistory};
pub use vectorize::{vectorize, DocMatrix, WordVectors};
