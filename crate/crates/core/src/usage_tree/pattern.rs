use crate::abstraction::{
    parse_expr_keyword, parse_symbol, AbstractSentence, Renamer, SymbolClass, BREAK,
};
use crate::lexer::{tokenize, TokenKind};
use crate::lexicon::Lexicon;

use super::UsageError;

/// A pattern token that must match literally.
///
/// `origin` is `Some` for renamed tokens: the class and the text that was
/// written in the usage file. Verbatim tokens (API names, punctuation) have
/// no origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub symbol: String,
    pub origin: Option<(SymbolClass, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SourceItem {
    Literal(Literal),
    Expr(usize),
    Br,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TargetItem {
    /// `origin` set: the token maps to a source literal with the same symbol.
    Literal(Literal),
    Expr(usize),
    /// `"_exprN"`: the capture, quoted as a string literal.
    ExprString(usize),
    Br,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsagePair {
    pub usage_id: usize,
    pub source: Vec<SourceItem>,
    pub target: Vec<TargetItem>,
}

impl UsagePair {
    /// Build a pair from patterns that are already in symbol form, e.g.
    /// `cudaFree ( _expr0 ) ;`. Abstract symbols serve as their own
    /// original text.
    pub fn from_symbols(
        usage_id: usize,
        source: &AbstractSentence,
        target: &AbstractSentence,
    ) -> Result<UsagePair, UsageError> {
        let literal = |s: &str| Literal {
            symbol: s.to_string(),
            origin: parse_symbol(s).map(|(class, _)| (class, s.to_string())),
        };
        let src = source
            .symbols
            .iter()
            .map(|s| {
                if s == BREAK {
                    SourceItem::Br
                } else if let Some(k) = parse_expr_keyword(s) {
                    SourceItem::Expr(k)
                } else {
                    SourceItem::Literal(literal(s))
                }
            })
            .collect();
        let tgt = target
            .symbols
            .iter()
            .map(|s| {
                if s == BREAK {
                    TargetItem::Br
                } else if let Some(k) = parse_expr_keyword(s) {
                    TargetItem::Expr(k)
                } else if let Some(k) = quoted_expr(s) {
                    TargetItem::ExprString(k)
                } else if source.symbols.contains(s) {
                    TargetItem::Literal(literal(s))
                } else {
                    TargetItem::Literal(Literal {
                        symbol: s.clone(),
                        origin: None,
                    })
                }
            })
            .collect();
        UsagePair::checked(usage_id, src, tgt, 0)
    }

    fn checked(
        usage_id: usize,
        source: Vec<SourceItem>,
        target: Vec<TargetItem>,
        line: usize,
    ) -> Result<UsagePair, UsageError> {
        let mut next = 0;
        for item in &source {
            if let SourceItem::Expr(k) = *item {
                if k < next {
                    return Err(UsageError::RepeatedExpr { line, index: k });
                }
                if k > next {
                    return Err(UsageError::ExprIndexGap { line, index: k });
                }
                next += 1;
            }
        }
        for item in &target {
            if let TargetItem::Expr(k) | TargetItem::ExprString(k) = *item {
                if k >= next {
                    return Err(UsageError::TargetExprUnbound { line, index: k });
                }
            }
        }
        if source.is_empty() {
            return Err(UsageError::EmptyPattern { line });
        }
        Ok(UsagePair {
            usage_id,
            source,
            target,
        })
    }

    pub fn expr_count(&self) -> usize {
        self.source
            .iter()
            .filter(|i| matches!(i, SourceItem::Expr(_)))
            .count()
    }

    /// Number of `_br` separators in the source pattern.
    pub fn breaks(&self) -> usize {
        self.source
            .iter()
            .filter(|i| matches!(i, SourceItem::Br))
            .count()
    }

    pub fn source_pattern(&self) -> AbstractSentence {
        AbstractSentence::new(self.source.iter().map(|i| match i {
            SourceItem::Literal(l) => l.symbol.clone(),
            SourceItem::Expr(k) => format!("_expr{k}"),
            SourceItem::Br => BREAK.to_string(),
        }))
    }

    pub fn target_pattern(&self) -> AbstractSentence {
        AbstractSentence::new(self.target.iter().map(|i| match i {
            TargetItem::Literal(l) => l.symbol.clone(),
            TargetItem::Expr(k) => format!("_expr{k}"),
            TargetItem::ExprString(k) => format!("\"_expr{k}\""),
            TargetItem::Br => BREAK.to_string(),
        }))
    }
}

fn quoted_expr(text: &str) -> Option<usize> {
    parse_expr_keyword(text.strip_prefix('"')?.strip_suffix('"')?)
}

/// Usage-file lines may carry `\_` escapes (`\_br`, `\_expr0`).
fn unescape_line(line: &str) -> String {
    line.replace("\\_", "_")
}

struct RawLine {
    line: usize,
    tokens: Vec<(TokenKind, String)>,
}

fn token_lines(
    text: &str,
    lexicon: &Lexicon,
    side: &'static str,
) -> Result<Vec<RawLine>, UsageError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let stream = tokenize(&unescape_line(line), lexicon).map_err(|source| UsageError::Lex {
            side,
            line: i + 1,
            source,
        })?;
        if stream.tokens.is_empty() {
            continue;
        }
        out.push(RawLine {
            line: i + 1,
            tokens: stream
                .tokens
                .into_iter()
                .map(|t| (t.kind, t.text))
                .collect(),
        });
    }
    Ok(out)
}

/// Pair line k of the CUDA usage file with line k of the OpenCL usage file.
///
/// Lines without tokens (blank, comment-only) are skipped on both sides
/// before pairing.
pub fn parse_usage_pairs(
    cuda_text: &str,
    opencl_text: &str,
    lexicon: &Lexicon,
) -> Result<Vec<UsagePair>, UsageError> {
    let cuda = token_lines(cuda_text, lexicon, "cuda")?;
    let opencl = token_lines(opencl_text, lexicon, "opencl")?;
    if cuda.len() != opencl.len() {
        return Err(UsageError::LineCountMismatch {
            cuda: cuda.len(),
            opencl: opencl.len(),
        });
    }

    let mut pairs = Vec::with_capacity(cuda.len());
    for (usage_id, (src, tgt)) in cuda.iter().zip(&opencl).enumerate() {
        let mut renamer = Renamer::default();
        let mut source = Vec::with_capacity(src.tokens.len());
        for (kind, text) in &src.tokens {
            source.push(if text == BREAK {
                SourceItem::Br
            } else if let Some(k) = parse_expr_keyword(text) {
                SourceItem::Expr(k)
            } else {
                let class = SymbolClass::of(*kind);
                SourceItem::Literal(Literal {
                    symbol: match class {
                        Some(c) => renamer.symbol(c, text),
                        None => text.clone(),
                    },
                    origin: class.map(|c| (c, text.clone())),
                })
            });
        }

        let mut target = Vec::with_capacity(tgt.tokens.len());
        for (kind, text) in &tgt.tokens {
            let mapped =
                SymbolClass::of(*kind).and_then(|c| renamer.lookup(c, text).map(|sym| (c, sym)));
            target.push(if text == BREAK {
                TargetItem::Br
            } else if let Some(k) = parse_expr_keyword(text) {
                TargetItem::Expr(k)
            } else if let Some(k) = quoted_expr(text).filter(|_| *kind == TokenKind::StringLiteral)
            {
                TargetItem::ExprString(k)
            } else if let Some((class, symbol)) = mapped {
                TargetItem::Literal(Literal {
                    symbol,
                    origin: Some((class, text.clone())),
                })
            } else {
                TargetItem::Literal(Literal {
                    symbol: text.clone(),
                    origin: None,
                })
            });
        }
        let pair = UsagePair::checked(usage_id, source, target, src.line).map_err(|e| match e {
            UsageError::TargetExprUnbound { index, .. } => UsageError::TargetExprUnbound {
                line: tgt.line,
                index,
            },
            e => e,
        })?;
        pairs.push(pair);
    }
    Ok(pairs)
}
