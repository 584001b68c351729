use std::collections::BTreeMap;
use std::ops::Range;

use super::pattern::{SourceItem, UsagePair};
use super::{Capture, MatchResult, UsageError};
use crate::abstraction::{AbstractSentence, BREAK};

#[derive(Debug, Clone, Default)]
struct Node {
    edges: BTreeMap<String, usize>,
    expr: Option<(usize, usize)>,
    terminal: Option<usize>,
}

/// Trie over source patterns. Literal symbols are edges; `_exprN` is a
/// capture node that swallows one balanced expression.
#[derive(Debug, Clone)]
pub struct UsageTree {
    nodes: Vec<Node>,
    pairs: Vec<UsagePair>,
    max_breaks: usize,
}

impl Default for UsageTree {
    fn default() -> Self {
        UsageTree {
            nodes: vec![Node::default()],
            pairs: Vec::new(),
            max_breaks: 0,
        }
    }
}

pub fn build_usage_tree(pairs: Vec<UsagePair>) -> Result<UsageTree, UsageError> {
    let mut tree = UsageTree::default();
    for pair in &pairs {
        let mut node = 0;
        for item in &pair.source {
            node = match item {
                SourceItem::Expr(k) => match tree.nodes[node].expr {
                    Some((idx, child)) => {
                        debug_assert_eq!(idx, *k);
                        child
                    }
                    None => {
                        let child = tree.push();
                        tree.nodes[node].expr = Some((*k, child));
                        child
                    }
                },
                other => {
                    let symbol = match other {
                        SourceItem::Literal(l) => l.symbol.as_str(),
                        _ => BREAK,
                    };
                    match tree.nodes[node].edges.get(symbol) {
                        Some(&child) => child,
                        None => {
                            let child = tree.push();
                            tree.nodes[node].edges.insert(symbol.to_string(), child);
                            child
                        }
                    }
                }
            };
        }
        if let Some(first) = tree.nodes[node].terminal {
            return Err(UsageError::DuplicatePattern {
                first,
                second: pair.usage_id,
                pattern: pair.source_pattern().to_string(),
            });
        }
        tree.nodes[node].terminal = Some(pair.usage_id);
        tree.max_breaks = tree.max_breaks.max(pair.breaks());
    }
    tree.pairs = pairs;
    Ok(tree)
}

/// End of the expression starting at `start`: the longest run that is
/// balanced in `()`/`[]` and stops before a top-level separator.
/// `None` if the run is empty or unbalanced.
pub fn capture_end(symbols: &[String], start: usize) -> Option<usize> {
    let mut open: Vec<&str> = Vec::new();
    let mut i = start;
    while i < symbols.len() {
        match symbols[i].as_str() {
            "(" => open.push(")"),
            "[" => open.push("]"),
            ")" | "]" if open.is_empty() => break,
            close @ (")" | "]") => {
                if open.pop() != Some(close) {
                    return None;
                }
            }
            "," | ";" | "<<<" | ">>>" | "{" | "}" | BREAK if open.is_empty() => break,
            _ => {}
        }
        i += 1;
    }
    (i > start && open.is_empty()).then_some(i)
}

impl UsageTree {
    fn push(&mut self) -> usize {
        self.nodes.push(Node::default());
        self.nodes.len() - 1
    }

    pub fn pairs(&self) -> &[UsagePair] {
        &self.pairs
    }

    pub fn pair(&self, usage_id: usize) -> Option<&UsagePair> {
        self.pairs.iter().find(|p| p.usage_id == usage_id)
    }

    /// Largest number of `_br` separators in any pattern; groups of up to
    /// `max_breaks + 1` statements are worth trying.
    pub fn max_breaks(&self) -> usize {
        self.max_breaks
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Literal edges leaving the root, in sorted order.
    pub fn root_edges(&self) -> impl Iterator<Item = &str> {
        self.nodes[0].edges.keys().map(String::as_str)
    }

    pub fn match_sentence(&self, sentence: &AbstractSentence) -> MatchResult {
        if sentence.is_empty() || sentence.is_untranslated() {
            return MatchResult::NotApplicable;
        }
        let mut spans = Vec::new();
        match self.walk(0, &sentence.symbols, 0, &mut spans) {
            Some(usage_id) => MatchResult::Matched {
                usage_id,
                captures: spans
                    .into_iter()
                    .map(|span: Range<usize>| Capture {
                        symbols: sentence.symbols[span.clone()].to_vec(),
                        span,
                    })
                    .collect(),
            },
            None => MatchResult::Uncovered,
        }
    }

    // Literal edge first; on failure fall back to the capture node.
    fn walk(
        &self,
        node: usize,
        symbols: &[String],
        pos: usize,
        spans: &mut Vec<Range<usize>>,
    ) -> Option<usize> {
        let n = &self.nodes[node];
        if pos == symbols.len() {
            return n.terminal;
        }
        if let Some(&child) = n.edges.get(&symbols[pos]) {
            if let Some(id) = self.walk(child, symbols, pos + 1, spans) {
                return Some(id);
            }
        }
        let (_, child) = n.expr?;
        let end = capture_end(symbols, pos)?;
        spans.push(pos..end);
        let found = self.walk(child, symbols, end, spans);
        if found.is_none() {
            spans.pop();
        }
        found
    }
}
