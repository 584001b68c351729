//! Paired API usages, the usage symbol tree, and expression capture.
//!
//! A usage pair is one line of a CUDA usage file and the same line of an
//! OpenCL usage file. Both are renamed like program text; `_exprN` marks a
//! parameter slot that matches any balanced expression, and `_br` joins
//! consecutive statements into one pattern.

mod pattern;
mod trie;

use std::collections::{BTreeMap, HashSet};
use std::ops::Range;

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

use crate::abstraction::{
    parse_symbol, rename_group, AbstractSentence, PreprocessedUnit, SymbolClass, SymbolMap,
};
use crate::lexer::{LexError, Token};

pub use pattern::{parse_usage_pairs, Literal, SourceItem, TargetItem, UsagePair};
pub use trie::{build_usage_tree, capture_end, UsageTree};

#[derive(Debug, Error)]
pub enum UsageError {
    #[error("usage files differ in length: {cuda} CUDA lines, {opencl} OpenCL lines")]
    LineCountMismatch { cuda: usize, opencl: usize },
    #[error("line {line}: _expr{index} breaks the 0, 1, 2, ... numbering")]
    ExprIndexGap { line: usize, index: usize },
    #[error("line {line}: _expr{index} appears twice in the source pattern")]
    RepeatedExpr { line: usize, index: usize },
    #[error("line {line}: target uses _expr{index}, which the source pattern lacks")]
    TargetExprUnbound { line: usize, index: usize },
    #[error("line {line}: empty pattern")]
    EmptyPattern { line: usize },
    #[error("usages {first} and {second} share the source pattern `{pattern}`")]
    DuplicatePattern {
        first: usize,
        second: usize,
        pattern: String,
    },
    #[error("{side} usage line {line}: {source}")]
    Lex {
        side: &'static str,
        line: usize,
        source: LexError,
    },
    #[error("unbalanced capture `{0}`")]
    UnbalancedCapture(String),
}

/// One `_exprN` capture: the span in the matched sentence and its symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Capture {
    pub span: Range<usize>,
    pub symbols: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchResult {
    /// `captures[k]` is the capture for `_exprk`.
    Matched {
        usage_id: usize,
        captures: Vec<Capture>,
    },
    Uncovered,
    NotApplicable,
}

impl MatchResult {
    pub fn is_matched(&self) -> bool {
        matches!(self, MatchResult::Matched { .. })
    }
}

pub fn match_sentence(tree: &UsageTree, sentence: &AbstractSentence) -> MatchResult {
    tree.match_sentence(sentence)
}

/// The match for one slot of a unit: a single sentence, or a `_br` group of
/// `len` consecutive sentences starting at `start`.
#[derive(Debug, Clone)]
pub struct UnitMatch {
    pub start: usize,
    pub len: usize,
    pub sentence: AbstractSentence,
    pub map: SymbolMap,
    pub result: MatchResult,
    pub kernel: bool,
}

/// Match every sentence of a unit. Groups are tried longest first, and only
/// as long as the tree holds a pattern with that many statements. Kernel
/// sentences are reported with `kernel: true` and never matched.
pub fn match_unit(tree: &UsageTree, unit: &PreprocessedUnit) -> Vec<UnitMatch> {
    let n = unit.sentences.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let origin = &unit.origins[i];
        if origin.is_kernel_context {
            out.push(UnitMatch {
                start: i,
                len: 1,
                sentence: unit.sentences[i].clone(),
                map: unit.maps[i].clone(),
                result: MatchResult::NotApplicable,
                kernel: true,
            });
            i += 1;
            continue;
        }

        let mut grouped = None;
        for len in (2..=tree.max_breaks() + 1).rev() {
            let Some(group) = unit.origins.get(i..i + len) else {
                continue;
            };
            if group.iter().any(|s| s.is_kernel_context) || !group.iter().any(|s| s.translatable) {
                continue;
            }
            let (sentence, map) = rename_group(group);
            let result = tree.match_sentence(&sentence);
            if result.is_matched() {
                grouped = Some(UnitMatch {
                    start: i,
                    len,
                    sentence,
                    map,
                    result,
                    kernel: false,
                });
                break;
            }
        }
        let m = grouped.unwrap_or_else(|| UnitMatch {
            start: i,
            len: 1,
            sentence: unit.sentences[i].clone(),
            map: unit.maps[i].clone(),
            result: tree.match_sentence(&unit.sentences[i]),
            kernel: false,
        });
        i += m.len;
        out.push(m);
    }
    out
}

/// A token of a stored capture.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExprToken {
    /// Kept as is: API names, keywords, punctuation.
    Verbatim(String),
    /// A renamed token, by original text.
    Named(SymbolClass, String),
    /// Same name as the pattern literal with this symbol; stays tied to it
    /// when the capture is substituted into another instance.
    Bound(String),
}

impl ExprToken {
    pub fn text(&self) -> &str {
        match self {
            ExprToken::Verbatim(t) | ExprToken::Named(_, t) | ExprToken::Bound(t) => t,
        }
    }
}

pub type CapturedExpr = Vec<ExprToken>;

pub fn is_balanced<'a>(texts: impl IntoIterator<Item = &'a str>) -> bool {
    let mut stack = Vec::new();
    for t in texts {
        match t {
            "(" | "[" => stack.push(t),
            ")" if stack.pop() != Some("(") => return false,
            "]" if stack.pop() != Some("[") => return false,
            _ => {}
        }
    }
    stack.is_empty()
}

/// Convert the captures of a unit match back to original-text tokens.
pub fn captured_exprs(m: &UnitMatch, unit: &PreprocessedUnit) -> Vec<CapturedExpr> {
    let MatchResult::Matched { captures, .. } = &m.result else {
        return Vec::new();
    };
    let mut flat: Vec<Option<&Token>> = Vec::new();
    for (k, s) in unit.origins[m.start..m.start + m.len].iter().enumerate() {
        if k > 0 {
            flat.push(None);
        }
        flat.extend(s.tokens.iter().map(Some));
    }
    debug_assert_eq!(flat.len(), m.sentence.symbols.len());

    let inside: HashSet<usize> = captures.iter().flat_map(|c| c.span.clone()).collect();
    let literal_symbols: HashSet<&str> = m
        .sentence
        .symbols
        .iter()
        .enumerate()
        .filter(|(p, _)| !inside.contains(p))
        .map(|(_, s)| s.as_str())
        .collect();

    captures
        .iter()
        .map(|c| {
            c.span
                .clone()
                .map(|p| {
                    let symbol = &m.sentence.symbols[p];
                    match (parse_symbol(symbol), flat[p]) {
                        (Some(_), _) if literal_symbols.contains(symbol.as_str()) => {
                            ExprToken::Bound(symbol.clone())
                        }
                        (Some((class, _)), Some(tok)) => ExprToken::Named(class, tok.text.clone()),
                        _ => ExprToken::Verbatim(symbol.clone()),
                    }
                })
                .collect()
        })
        .collect()
}

/// Captures collected per expression node, plus the distinct sentences
/// that were matched.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExprStore {
    nodes: BTreeMap<(usize, usize), IndexSet<CapturedExpr>>,
    found: IndexMap<AbstractSentence, (usize, Vec<CapturedExpr>)>,
}

impl ExprStore {
    /// Add a capture to node `(usage_id, expr)`. Duplicates are ignored.
    pub fn insert(
        &mut self,
        usage_id: usize,
        expr: usize,
        capture: CapturedExpr,
    ) -> Result<(), UsageError> {
        if capture.is_empty() || !is_balanced(capture.iter().map(ExprToken::text)) {
            let text: Vec<_> = capture.iter().map(ExprToken::text).collect();
            return Err(UsageError::UnbalancedCapture(text.join(" ")));
        }
        self.nodes
            .entry((usage_id, expr))
            .or_default()
            .insert(capture);
        Ok(())
    }

    /// Record one matched sentence and its captures.
    pub fn record(
        &mut self,
        usage_id: usize,
        sentence: &AbstractSentence,
        captures: Vec<CapturedExpr>,
    ) -> Result<(), UsageError> {
        for (k, c) in captures.iter().enumerate() {
            self.insert(usage_id, k, c.clone())?;
        }
        self.found
            .entry(sentence.clone())
            .or_insert((usage_id, captures));
        Ok(())
    }

    pub fn captures(&self, usage_id: usize, expr: usize) -> Vec<&CapturedExpr> {
        self.nodes
            .get(&(usage_id, expr))
            .map(|set| set.iter().collect())
            .unwrap_or_default()
    }

    /// Distinct matched sentences with the usage and captures of their
    /// first occurrence.
    pub fn found(&self) -> impl Iterator<Item = (&AbstractSentence, usize, &[CapturedExpr])> {
        self.found.iter().map(|(s, (u, c))| (s, *u, c.as_slice()))
    }

    pub fn found_count(&self) -> usize {
        self.found.len()
    }

    pub fn is_matched(&self, usage_id: usize) -> bool {
        self.found.values().any(|(u, _)| *u == usage_id)
    }

    /// Append another store; entries already present keep their position.
    pub fn merge(&mut self, other: ExprStore) {
        for (key, set) in other.nodes {
            self.nodes.entry(key).or_default().extend(set);
        }
        for (s, v) in other.found {
            self.found.entry(s).or_insert(v);
        }
    }
}
