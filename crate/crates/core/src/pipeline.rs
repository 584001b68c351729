//! File-level glue shared by the command line and the tests.

use std::fs;
use std::path::Path;

use crate::abstraction::preprocess_unit;
use crate::error::{Error, Result};
use crate::lexer::{tokenize, Context};
use crate::lexicon::Lexicon;
use crate::postproc::{format_unit, restore_unit, split_unit, Placed, RestoreError, SplitOutput};
use crate::translate::{translate_unit, Backend, TranslatedUnit};
use crate::usage_tree::{build_usage_tree, parse_usage_pairs, UsageTree};

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_lexicon(path: Option<&Path>) -> Result<Lexicon> {
    match path {
        Some(p) => Ok(Lexicon::parse(&read(p)?)?),
        None => Ok(Lexicon::default()),
    }
}

pub fn load_usage_tree(cuda: &Path, opencl: &Path, lexicon: &Lexicon) -> Result<UsageTree> {
    let pairs = parse_usage_pairs(&read(cuda)?, &read(opencl)?, lexicon)?;
    Ok(build_usage_tree(pairs)?)
}

#[derive(Debug, Clone)]
pub struct FileTranslation {
    pub unit: TranslatedUnit,
    pub placed: Vec<Placed>,
    pub restore_errors: Vec<RestoreError>,
    pub output: SplitOutput,
}

pub fn translate_source(
    path: &Path,
    source: &str,
    backend: &Backend,
    tree: &UsageTree,
    lexicon: &Lexicon,
    context: Context,
) -> Result<FileTranslation> {
    let unit = preprocess_unit(source, lexicon, context).map_err(|e| Error::Lex {
        path: path.to_path_buf(),
        source: e,
    })?;
    let translated = translate_unit(&unit, backend, tree, lexicon)?;
    let (placed, restore_errors) = restore_unit(&translated);
    let output = split_unit(&translated, &placed);
    Ok(FileTranslation {
        unit: translated,
        placed,
        restore_errors,
        output,
    })
}

/// Preprocess, pass every sentence through unchanged, restore and format.
pub fn identity_round_trip(path: &Path, source: &str, lexicon: &Lexicon) -> Result<String> {
    let t = translate_source(
        path,
        source,
        &Backend::Identity,
        &UsageTree::default(),
        lexicon,
        Context::Auto,
    )?;
    Ok(format_unit(&t.placed, &t.unit.passthrough))
}

/// Token texts of a source file, comments and directives excluded.
pub fn token_texts(path: &Path, source: &str, lexicon: &Lexicon) -> Result<Vec<String>> {
    let stream = tokenize(source, lexicon).map_err(|e| Error::Lex {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(stream.tokens.into_iter().map(|t| t.text).collect())
}
