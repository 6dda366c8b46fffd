use std::io;
use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] khtext_core::Error),
    #[error("{}: {error}", path.display())]
    Io { path: PathBuf, error: io::Error },
    #[error("not a {kind} file: expected magic {expected:?}, found {found:?}")]
    BadMagic {
        kind: &'static str,
        expected: &'static str,
        found: String,
    },
    #[error("unsupported {kind} file version {found} (this build reads version {supported})")]
    BadVersion {
        kind: &'static str,
        found: u32,
        supported: u32,
    },
    #[error("{kind} file is truncated")]
    Truncated { kind: &'static str },
    #[error("corrupt {kind} file: {msg}")]
    Corrupt { kind: &'static str, msg: String },
    #[error("line {line}: {msg}")]
    Dataset { line: usize, msg: String },
    #[error("{0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, error: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            error,
        }
    }
}
