use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::dataset::DatasetError;
use crate::lexer::LexError;
use crate::lexicon::LexiconError;
use crate::mapfile::MapFileError;
use crate::postproc::RestoreError;
use crate::translate::TranslateError;
use crate::usage_tree::UsageError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Lex { path: PathBuf, source: LexError },
    #[error("lexicon: {0}")]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Usage(#[from] UsageError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Restore(#[from] RestoreError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    MapFile(#[from] MapFileError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
