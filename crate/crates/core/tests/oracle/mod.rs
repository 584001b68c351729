//! Reference implementations the library is checked against. Each one is
//! written from the definition, not from the library code: a linear-scan
//! matcher, a nested-loop Cartesian enumerator and a first-occurrence
//! renamer.

#![allow(dead_code)]

use std::collections::HashMap;
use std::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;

use cutrans::abstraction::{AbstractSentence, SymbolClass};
use cutrans::usage_tree::{build_usage_tree, ExprStore, ExprToken, UsagePair, UsageTree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Lit(String),
    Expr,
}

pub fn items(pattern: &str) -> Vec<Item> {
    pattern
        .split_whitespace()
        .map(|s| {
            if s.starts_with("_expr") {
                Item::Expr
            } else {
                Item::Lit(s.to_string())
            }
        })
        .collect()
}

const SEPARATORS: &[&str] = &[",", ";", "<<<", ">>>", "{", "}", "_br"];

// balanced := (plain | "(" balanced ")" | "[" balanced "]")*
fn balanced(tokens: &[String]) -> bool {
    fn group(tokens: &[String], mut i: usize, close: Option<&str>) -> Option<usize> {
        while i < tokens.len() {
            match tokens[i].as_str() {
                "(" => i = group(tokens, i + 1, Some(")"))?,
                "[" => i = group(tokens, i + 1, Some("]"))?,
                t @ (")" | "]") => return (Some(t) == close).then_some(i + 1),
                _ => i += 1,
            }
        }
        close.is_none().then_some(i)
    }
    group(tokens, 0, None) == Some(tokens.len())
}

/// The capture starting at `start`: everything up to the first closer or
/// separator at bracket depth zero, provided it is non-empty and balanced.
pub fn capture(symbols: &[String], start: usize) -> Option<usize> {
    let mut depth = 0i64;
    let mut stop = symbols.len();
    for (i, s) in symbols.iter().enumerate().skip(start) {
        let s = s.as_str();
        let top_level_stop = depth == 0 && (s == ")" || s == "]" || SEPARATORS.contains(&s));
        if top_level_stop {
            stop = i;
            break;
        }
        match s {
            "(" | "[" => depth += 1,
            ")" | "]" => depth -= 1,
            _ => {}
        }
    }
    (stop > start && balanced(&symbols[start..stop])).then_some(stop)
}

/// Match one pattern on its own. Captures are deterministic, so there is at
/// most one way for a single pattern to match.
pub fn match_one(pattern: &[Item], symbols: &[String]) -> Option<Vec<Range<usize>>> {
    let mut pos = 0;
    let mut spans = Vec::new();
    for item in pattern {
        match item {
            Item::Lit(l) => {
                if symbols.get(pos) != Some(l) {
                    return None;
                }
                pos += 1;
            }
            Item::Expr => {
                let end = capture(symbols, pos)?;
                spans.push(pos..end);
                pos = end;
            }
        }
    }
    (pos == symbols.len()).then_some(spans)
}

/// Linear scan: try every pattern, and among the ones that match prefer a
/// literal over a capture at the first position where they differ.
pub fn linear_match(
    patterns: &[Vec<Item>],
    symbols: &[String],
) -> Option<(usize, Vec<Range<usize>>)> {
    let rank = |p: &[Item]| -> Vec<u8> { p.iter().map(|i| u8::from(*i == Item::Expr)).collect() };
    patterns
        .iter()
        .enumerate()
        .filter_map(|(id, p)| match_one(p, symbols).map(|spans| (rank(p), id, spans)))
        .min_by(|a, b| a.0.cmp(&b.0))
        .map(|(_, id, spans)| (id, spans))
}

pub const ALPHABET: [&str; 10] = ["a", "b", "c", "(", ")", "[", "]", ",", ";", "_id0"];

fn random_symbols(rng: &mut impl Rng, len: usize) -> Vec<String> {
    (0..len)
        .map(|_| ALPHABET.choose(rng).unwrap().to_string())
        .collect()
}

/// A random pattern set (distinct sources) and a sentence over [`ALPHABET`].
/// Half of the sentences are built from one of the patterns so that matches
/// are common.
pub fn random_instance(rng: &mut impl Rng) -> (Vec<String>, Vec<String>) {
    let mut patterns: Vec<String> = Vec::new();
    for _ in 0..rng.gen_range(1..=6) {
        let len = rng.gen_range(1..=5);
        let mut next = 0;
        let p: Vec<String> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    next += 1;
                    format!("_expr{}", next - 1)
                } else {
                    ALPHABET.choose(rng).unwrap().to_string()
                }
            })
            .collect();
        let p = p.join(" ");
        if !patterns.contains(&p) {
            patterns.push(p);
        }
    }
    let sentence = if rng.gen_bool(0.5) {
        let template = patterns.choose(rng).unwrap();
        let mut out = Vec::new();
        for s in template.split_whitespace() {
            if s.starts_with("_expr") {
                let n = rng.gen_range(1..=3);
                out.extend(random_symbols(rng, n));
            } else {
                out.push(s.to_string());
            }
        }
        out
    } else {
        let n = rng.gen_range(1..=8);
        random_symbols(rng, n)
    };
    (patterns, sentence)
}

pub fn tree_of(patterns: &[String]) -> UsageTree {
    let pairs = patterns
        .iter()
        .enumerate()
        .map(|(i, p)| {
            UsagePair::from_symbols(
                i,
                &AbstractSentence::parse(p),
                &AbstractSentence::parse("x ;"),
            )
            .unwrap()
        })
        .collect();
    build_usage_tree(pairs).unwrap()
}

/// A capture token for permutation tests: kept verbatim, or renamed by
/// class on instantiation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tok {
    Plain(String),
    Named(SymbolClass, String),
}

impl Tok {
    pub fn to_expr_token(&self) -> ExprToken {
        match self {
            Tok::Plain(t) => ExprToken::Verbatim(t.clone()),
            Tok::Named(c, t) => ExprToken::Named(*c, t.clone()),
        }
    }
}

/// One usage for the permutation law: source and target templates over
/// plain words and `_exprN`, plus the distinct captures of each node.
#[derive(Debug, Clone)]
pub struct PermUsage {
    pub source: String,
    pub target: String,
    pub nodes: Vec<Vec<Vec<Tok>>>,
}

fn prefix(c: SymbolClass) -> &'static str {
    match c {
        SymbolClass::Id => "_id",
        SymbolClass::Op => "_op",
        SymbolClass::Tp => "_tp",
    }
}

/// Substitute captures into both templates, then number named tokens per
/// class by first occurrence, source side first.
pub fn render(u: &PermUsage, choice: &[&Vec<Tok>]) -> (String, String) {
    let mut numbers: HashMap<(SymbolClass, String), usize> = HashMap::new();
    let mut counts: HashMap<SymbolClass, usize> = HashMap::new();
    let mut side = |template: &str| -> String {
        let mut out: Vec<String> = Vec::new();
        for word in template.split_whitespace() {
            let Some(k) = word.strip_prefix("_expr") else {
                out.push(word.to_string());
                continue;
            };
            let k: usize = k.parse().unwrap();
            for tok in choice[k] {
                match tok {
                    Tok::Plain(t) => out.push(t.clone()),
                    Tok::Named(c, t) => {
                        let n = *numbers.entry((*c, t.clone())).or_insert_with(|| {
                            let next = counts.entry(*c).or_insert(0);
                            *next += 1;
                            *next - 1
                        });
                        out.push(format!("{}{n}", prefix(*c)));
                    }
                }
            }
        }
        out.join(" ")
    };
    let s = side(&u.source);
    let t = side(&u.target);
    (s, t)
}

/// Every combination of captures, by nested iteration over the nodes.
pub fn brute_force(u: &PermUsage) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut stack: Vec<&Vec<Tok>> = Vec::new();
    fn go<'a>(
        u: &'a PermUsage,
        k: usize,
        stack: &mut Vec<&'a Vec<Tok>>,
        out: &mut Vec<(String, String)>,
    ) {
        if k == u.nodes.len() {
            out.push(render(u, stack));
            return;
        }
        for c in &u.nodes[k] {
            stack.push(c);
            go(u, k + 1, stack, out);
            stack.pop();
        }
    }
    go(u, 0, &mut stack, &mut out);
    out
}

fn random_capture(rng: &mut impl Rng) -> Vec<Tok> {
    let len = rng.gen_range(1..=3);
    (0..len)
        .map(|_| match rng.gen_range(0..4) {
            0 => Tok::Plain(["0", "1", "NULL"].choose(rng).unwrap().to_string()),
            1 => Tok::Named(SymbolClass::Op, ["*", "+"].choose(rng).unwrap().to_string()),
            2 => Tok::Named(
                SymbolClass::Tp,
                ["int", "float"].choose(rng).unwrap().to_string(),
            ),
            _ => Tok::Named(
                SymbolClass::Id,
                ["a", "b", "n", "x_gpu"].choose(rng).unwrap().to_string(),
            ),
        })
        .collect()
}

/// A random store: 1..=4 usages, each with 1..=3 expression nodes holding
/// 1..=5 distinct captures.
pub fn random_store(rng: &mut impl Rng) -> Vec<PermUsage> {
    let usages = rng.gen_range(1..=4);
    (0..usages)
        .map(|u| {
            let n = rng.gen_range(1..=3);
            let args: Vec<String> = (0..n).map(|k| format!("_expr{k}")).collect();
            let mut shuffled = args.clone();
            shuffled.shuffle(rng);
            let nodes = (0..n)
                .map(|_| {
                    let want = rng.gen_range(1..=5);
                    let mut caps: Vec<Vec<Tok>> = Vec::new();
                    for _ in 0..want * 4 {
                        if caps.len() == want {
                            break;
                        }
                        let c = random_capture(rng);
                        if !caps.contains(&c) {
                            caps.push(c);
                        }
                    }
                    caps
                })
                .collect();
            PermUsage {
                source: format!("api{u} ( {} ) ;", args.join(" , ")),
                target: format!("clApi{u} ( {} ) ;", shuffled.join(" , ")),
                nodes,
            }
        })
        .collect()
}

pub fn build_store(usages: &[PermUsage]) -> (UsageTree, ExprStore) {
    let pairs = usages
        .iter()
        .enumerate()
        .map(|(i, u)| {
            UsagePair::from_symbols(
                i,
                &AbstractSentence::parse(&u.source),
                &AbstractSentence::parse(&u.target),
            )
            .unwrap()
        })
        .collect();
    let tree = build_usage_tree(pairs).unwrap();
    let mut store = ExprStore::default();
    for (i, u) in usages.iter().enumerate() {
        for (k, node) in u.nodes.iter().enumerate() {
            for c in node {
                store
                    .insert(i, k, c.iter().map(Tok::to_expr_token).collect())
                    .unwrap();
            }
        }
    }
    (tree, store)
}
