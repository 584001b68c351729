//! Sentence-level CUDA to OpenCL translation.
//!
//! The pipeline has four stages:
//!
//! 1. [`abstraction::preprocess_unit`] tokenizes a source file, groups tokens
//!    into statement sentences and renames identifiers, operators and types
//!    to abstract symbols (`_id0`, `_op1`, `_tp0`, ...).
//! 2. A [`translate::Backend`] turns renamed CUDA sentences into renamed
//!    OpenCL sentences, either with the built-in rule engine (usage trees
//!    plus the kernel token table) or through an external command.
//! 3. [`postproc`] restores the original names and formats the result.
//! 4. [`dataset`] builds a parallel training corpus from paired API usages
//!    and a CUDA corpus, for training an external neural backend.

pub mod abstraction;
pub mod dataset;
pub mod lexer;
pub mod lexicon;
pub mod mapfile;
pub mod pipeline;
pub mod postproc;
pub mod translate;
pub mod usage_tree;

mod error;

pub use abstraction::{preprocess_unit, AbstractSentence, PreprocessedUnit, SymbolMap};
pub use error::{Error, Result};
pub use lexer::{Context, LexError, Sentence, Token, TokenKind};
pub use lexicon::Lexicon;
pub use translate::{Backend, TranslatedUnit};
pub use usage_tree::{MatchResult, UsagePair, UsageTree};
