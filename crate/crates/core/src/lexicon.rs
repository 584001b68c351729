//! Token classification tables.
//!
//! A [`Lexicon`] decides which words are type keywords, which are API
//! keywords, and how kernel qualifiers and built-ins map between the two
//! languages. It is loaded from a small sectioned text file; the default
//! one ships with the crate (see `default.lex`).
//!
//! File grammar:
//!
//! ```text
//! file    := line*
//! line    := blank | comment | header | entry
//! comment := '#' any*                    (only as the first non-blank char)
//! header  := '[' section ']'
//! section := types | api | not_api | api_prefixes | device_allocators
//!          | kernel_builtins | kernel_qualifiers
//! entry   := word                        (set and list sections)
//!          | tokens '=>' tokens          (kernel_builtins, kernel_qualifiers)
//! tokens  := token (' ' token)*
//! ```

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::lexer::{is_operator_text, is_punctuation_text, TokenKind};

/// Reserved words that are neither types nor API calls. Never renamed.
pub const CONTROL_KEYWORDS: &[&str] = &[
    "sizeof", "return", "for", "if", "while", "else", "do", "switch", "case", "default", "break",
    "continue", "goto", "const", "static", "extern", "volatile", "inline", "struct", "typedef",
    "enum", "union", "register",
];

const DEFAULT_LEXICON: &str = include_str!("default.lex");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("line {line}: unknown section [{name}]")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: entry outside of any section")]
    EntryOutsideSection { line: usize },
    #[error("line {line}: expected `key => value` in a mapping section")]
    MissingArrow { line: usize },
    #[error("line {line}: `{text}` is not a valid token")]
    InvalidToken { line: usize, text: String },
    #[error("line {line}: `{text}` must be a single word")]
    NotAWord { line: usize, text: String },
    #[error("`{0}` is listed both as a type and as an API keyword")]
    TypeApiOverlap(String),
}

/// One table-driven rewrite: a run of source tokens replaced by target tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenRewrite {
    pub from: Vec<String>,
    pub to: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    pub type_keywords: BTreeSet<String>,
    pub api_keywords: BTreeSet<String>,
    pub not_api: BTreeSet<String>,
    pub api_prefixes: Vec<String>,
    pub device_allocators: BTreeSet<String>,
    pub kernel_builtin_table: Vec<TokenRewrite>,
    pub kernel_qualifier_table: Vec<TokenRewrite>,
    // Built-in heads that contain a dot (`threadIdx.x`); the lexer merges
    // `ident . ident` into one token when it spells one of these.
    dotted_heads: HashSet<String>,
}

#[derive(Clone, Copy)]
enum Section {
    Types,
    Api,
    NotApi,
    ApiPrefixes,
    DeviceAllocators,
    KernelBuiltins,
    KernelQualifiers,
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::parse(DEFAULT_LEXICON).expect("bundled lexicon is well-formed")
    }
}

impl Lexicon {
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lex = Lexicon {
            type_keywords: BTreeSet::new(),
            api_keywords: BTreeSet::new(),
            not_api: BTreeSet::new(),
            api_prefixes: Vec::new(),
            device_allocators: BTreeSet::new(),
            kernel_builtin_table: Vec::new(),
            kernel_qualifier_table: Vec::new(),
            dotted_heads: HashSet::new(),
        };
        let mut section = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let entry = raw.trim();
            if entry.is_empty() || entry.starts_with('#') {
                continue;
            }
            if let Some(name) = entry.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = Some(match name.trim() {
                    "types" => Section::Types,
                    "api" => Section::Api,
                    "not_api" => Section::NotApi,
                    "api_prefixes" => Section::ApiPrefixes,
                    "device_allocators" => Section::DeviceAllocators,
                    "kernel_builtins" => Section::KernelBuiltins,
                    "kernel_qualifiers" => Section::KernelQualifiers,
                    other => {
                        return Err(LexiconError::UnknownSection {
                            line,
                            name: other.to_string(),
                        })
                    }
                });
                continue;
            }
            let Some(section) = section else {
                return Err(LexiconError::EntryOutsideSection { line });
            };
            match section {
                Section::KernelBuiltins | Section::KernelQualifiers => {
                    let rewrite = parse_rewrite(entry, line)?;
                    if let Section::KernelBuiltins = section {
                        lex.kernel_builtin_table.push(rewrite);
                    } else {
                        lex.kernel_qualifier_table.push(rewrite);
                    }
                }
                _ => {
                    if entry.split_whitespace().count() != 1 {
                        return Err(LexiconError::NotAWord {
                            line,
                            text: entry.to_string(),
                        });
                    }
                    let word = entry.to_string();
                    match section {
                        Section::Types => {
                            lex.type_keywords.insert(word);
                        }
                        Section::Api => {
                            lex.api_keywords.insert(word);
                        }
                        Section::NotApi => {
                            lex.not_api.insert(word);
                        }
                        Section::ApiPrefixes => lex.api_prefixes.push(word),
                        Section::DeviceAllocators => {
                            lex.device_allocators.insert(word);
                        }
                        Section::KernelBuiltins | Section::KernelQualifiers => unreachable!(),
                    }
                }
            }
        }

        if let Some(overlap) = lex.type_keywords.intersection(&lex.api_keywords).next() {
            return Err(LexiconError::TypeApiOverlap(overlap.clone()));
        }
        lex.dotted_heads = lex
            .kernel_builtin_table
            .iter()
            .chain(&lex.kernel_qualifier_table)
            .filter_map(|rw| rw.from.first())
            .filter(|head| head.contains('.'))
            .cloned()
            .collect();
        Ok(lex)
    }

    /// Classify a word (identifier-shaped lexeme, possibly a dotted built-in).
    pub fn classify_word(&self, word: &str) -> TokenKind {
        if CONTROL_KEYWORDS.contains(&word) {
            TokenKind::ControlKeyword
        } else if self.type_keywords.contains(word) {
            TokenKind::TypeKeyword
        } else if self.api_keywords.contains(word) || self.is_kernel_head(word) {
            TokenKind::ApiKeyword
        } else if self.not_api.contains(word) {
            TokenKind::Identifier
        } else if self.has_api_prefix(word) {
            TokenKind::ApiKeyword
        } else {
            TokenKind::Identifier
        }
    }

    /// Prefix match with a camel-case boundary: `cudaMalloc` and `clFinish`
    /// qualify, `current` and `clamp` do not. Prefixes ending in `_` match
    /// unconditionally.
    fn has_api_prefix(&self, word: &str) -> bool {
        self.api_prefixes.iter().any(|prefix| {
            let Some(rest) = word.strip_prefix(prefix.as_str()) else {
                return false;
            };
            if rest.is_empty() {
                return false;
            }
            if prefix.ends_with('_') {
                return true;
            }
            rest.starts_with(|c: char| c.is_ascii_uppercase() || c == '_')
        })
    }

    /// True when `word` is the first token of a kernel built-in or qualifier rewrite.
    pub fn is_kernel_head(&self, word: &str) -> bool {
        self.kernel_builtin_table
            .iter()
            .chain(&self.kernel_qualifier_table)
            .any(|rw| rw.from.first().is_some_and(|h| h == word))
    }

    pub fn is_kernel_qualifier(&self, word: &str) -> bool {
        self.kernel_qualifier_table
            .iter()
            .any(|rw| rw.from.first().is_some_and(|h| h == word))
    }

    pub fn is_dotted_head(&self, text: &str) -> bool {
        self.dotted_heads.contains(text)
    }
}

fn parse_rewrite(entry: &str, line: usize) -> Result<TokenRewrite, LexiconError> {
    let (from, to) = entry
        .split_once("=>")
        .ok_or(LexiconError::MissingArrow { line })?;
    let split = |side: &str| -> Result<Vec<String>, LexiconError> {
        let toks: Vec<String> = side.split_whitespace().map(str::to_string).collect();
        if toks.is_empty() {
            return Err(LexiconError::MissingArrow { line });
        }
        if let Some(bad) = toks.iter().find(|t| !is_valid_token_text(t)) {
            return Err(LexiconError::InvalidToken {
                line,
                text: bad.clone(),
            });
        }
        Ok(toks)
    };
    Ok(TokenRewrite {
        from: split(from)?,
        to: split(to)?,
    })
}

/// Accepts identifiers (optionally dotted), numbers, operators and punctuation.
pub fn is_valid_token_text(text: &str) -> bool {
    let is_ident = |s: &str| {
        let mut chars = s.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    };
    if text.split('.').all(is_ident) {
        return true;
    }
    if text.starts_with(|c: char| c.is_ascii_digit()) {
        return text
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '.' || c == '_');
    }
    is_operator_text(text) || is_punctuation_text(text)
}
