//! Subword embeddings trained with negative sampling.

mod eigen;
mod model;
mod noise;
mod query;
mod store;
mod train;

pub use eigen::symmetric_eigen;
pub use model::{EmbeddingHyper, EmbeddingModel, Mode, WordVector};
pub use noise::{NoiseTable, NOISE_POWER};
pub use query::{cosine, nearest_neighbors, pca_2d, pca_project, NeighborIndex};
pub use store::{Matrix, RowStore};
pub use train::{
    encode_corpus, noise_table, prepare, train, worker_rng, LossStats, Schedule, TrainReport,
    Trainer, NEGATIVE_REDRAWS,
};
