use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Empty token, empty document or otherwise unusable input value.
    InvalidInput(String),
    /// Token containing a reserved boundary marker.
    ReservedMarker(String),
    EmptyCorpus,
    ShapeMismatch {
        op: &'static str,
        expected: String,
        found: String,
    },
    InvalidConfig(String),
    LabelOutOfRange {
        label: usize,
        k: usize,
    },
    InvalidTarget(f64),
    LengthMismatch {
        truth: usize,
        pred: usize,
    },
    ZeroNormQuery(String),
    TooFewTokens {
        needed: usize,
        found: usize,
    },
    EmbeddingMismatch {
        expected: u64,
        found: u64,
    },
    NonFiniteLoss {
        epoch: usize,
        batch: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::ReservedMarker(tok) => {
                write!(f, "token {tok:?} contains a reserved boundary marker '<' or '>'")
            }
            Error::EmptyCorpus => write!(f, "corpus is empty after filtering"),
            Error::ShapeMismatch { op, expected, found } => {
                write!(f, "{op}: shape mismatch, expected {expected}, found {found}")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::LabelOutOfRange { label, k } => {
                write!(f, "label id {label} out of range for {k} labels")
            }
            Error::InvalidTarget(t) => write!(f, "binary target must be 0 or 1, found {t}"),
            Error::LengthMismatch { truth, pred } => write!(
                f,
                "truth and prediction lengths differ ({truth} vs {pred})"
            ),
            Error::ZeroNormQuery(tok) => write!(f, "query {tok:?} has a zero vector"),
            Error::TooFewTokens { needed, found } => {
                write!(f, "need at least {needed} tokens, found {found}")
            }
            Error::EmbeddingMismatch { expected, found } => write!(
                f,
                "embedding fingerprint {found:016x} does not match the model's {expected:016x}"
            ),
            Error::NonFiniteLoss { epoch, batch } => write!(
                f,
                "loss became non-finite at epoch {epoch}, batch {batch}; lower the learning rate"
            ),
        }
    }
}

impl core::error::Error for Error {}
