//! Renamed CUDA sentences to renamed OpenCL sentences.
//!
//! Host sentences go through a [`Backend`]; kernel sentences always go
//! through the lexicon's kernel token table.

use std::fs;
use std::io;
use std::process::Command;

use thiserror::Error;

use crate::abstraction::{
    parse_symbol, AbstractSentence, PreprocessedUnit, SymbolClass, SymbolMap, BREAK,
};
use crate::lexer::{PassthroughLine, Sentence};
use crate::lexicon::Lexicon;
use crate::usage_tree::{match_unit, Capture, MatchResult, TargetItem, UsagePair, UsageTree};

#[derive(Debug, Error)]
pub enum TranslateError {
    #[error("usage {usage_id}: target uses _expr{index}, but the match has no such capture")]
    UnboundCapture { usage_id: usize, index: usize },
    #[error("usage {usage_id}: \"_expr{index}\" needs a single-token capture, got `{capture}`")]
    StringCapture {
        usage_id: usize,
        index: usize,
        capture: String,
    },
    #[error("usage {0} is not in the usage tree")]
    UnknownUsage(usize),
    #[error("backend `{command}`: {source}")]
    BackendIo { command: String, source: io::Error },
    #[error("backend `{command}` exited with {status}: {stderr}")]
    BackendFailed {
        command: String,
        status: String,
        stderr: String,
    },
    #[error("backend protocol: sent {sent} sentences, received {received}")]
    LineCount { sent: usize, received: usize },
    #[error("backend protocol: output line {line} is empty")]
    Malformed { line: usize },
}

impl TranslateError {
    pub fn is_backend_error(&self) -> bool {
        matches!(
            self,
            TranslateError::BackendIo { .. }
                | TranslateError::BackendFailed { .. }
                | TranslateError::LineCount { .. }
                | TranslateError::Malformed { .. }
        )
    }
}

/// An external translator run as `<program> <args...> <in_file> <out_file>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalCommand {
    pub program: String,
    pub args: Vec<String>,
}

impl ExternalCommand {
    /// Split a command line on whitespace. No shell quoting is applied.
    pub fn parse(command: &str) -> Option<ExternalCommand> {
        let mut parts = command.split_whitespace().map(str::to_string);
        Some(ExternalCommand {
            program: parts.next()?,
            args: parts.collect(),
        })
    }

    fn display(&self) -> String {
        std::iter::once(&self.program)
            .chain(&self.args)
            .cloned()
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Send sentences through the command; exactly one line must come back
    /// per sentence.
    pub fn run(
        &self,
        sentences: &[AbstractSentence],
    ) -> Result<Vec<AbstractSentence>, TranslateError> {
        let command = self.display();
        let io_err = |source| TranslateError::BackendIo {
            command: command.clone(),
            source,
        };
        let dir = tempfile::tempdir().map_err(io_err)?;
        let input = dir.path().join("in.txt");
        let output = dir.path().join("out.txt");
        let text: String = sentences.iter().map(|s| format!("{s}\n")).collect();
        fs::write(&input, text).map_err(io_err)?;

        let result = Command::new(&self.program)
            .args(&self.args)
            .arg(&input)
            .arg(&output)
            .output()
            .map_err(io_err)?;
        if !result.status.success() {
            return Err(TranslateError::BackendFailed {
                command,
                status: result.status.to_string(),
                stderr: String::from_utf8_lossy(&result.stderr).trim().to_string(),
            });
        }
        let reply = fs::read_to_string(&output).map_err(io_err)?;
        let lines: Vec<&str> = reply.lines().collect();
        if lines.len() != sentences.len() {
            return Err(TranslateError::LineCount {
                sent: sentences.len(),
                received: lines.len(),
            });
        }
        lines
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let s = AbstractSentence::parse(l);
                if s.is_empty() {
                    Err(TranslateError::Malformed { line: i + 1 })
                } else {
                    Ok(s)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    /// Usage-tree substitution with the built-in kernel-launch expansion.
    Rule,
    External(ExternalCommand),
    /// Every sentence unchanged, kernel code included.
    Identity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub message: String,
}

/// Output parallel to the input unit. A `_br` group translates into the
/// slot of its first statement; the other slots are left empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TranslatedUnit {
    pub sentences: Vec<AbstractSentence>,
    pub maps: Vec<SymbolMap>,
    pub origins: Vec<Sentence>,
    pub passthrough: Vec<PassthroughLine>,
    pub kernel_regions: Vec<(usize, usize)>,
    pub warnings: Vec<Warning>,
}

pub fn translate_matched(
    pair: &UsagePair,
    captures: &[Capture],
) -> Result<AbstractSentence, TranslateError> {
    let capture = |index: usize| {
        captures.get(index).ok_or(TranslateError::UnboundCapture {
            usage_id: pair.usage_id,
            index,
        })
    };
    let mut out = Vec::new();
    for item in &pair.target {
        match item {
            TargetItem::Literal(l) => out.push(l.symbol.clone()),
            TargetItem::Expr(k) => out.extend(capture(*k)?.symbols.iter().cloned()),
            TargetItem::ExprString(k) => match capture(*k)?.symbols.as_slice() {
                [one] => out.push(format!("\"{one}\"")),
                more => {
                    return Err(TranslateError::StringCapture {
                        usage_id: pair.usage_id,
                        index: *k,
                        capture: more.join(" "),
                    })
                }
            },
            TargetItem::Br => out.push(BREAK.to_string()),
        }
    }
    Ok(AbstractSentence { symbols: out })
}

fn is_class(symbol: &str, class: SymbolClass) -> bool {
    parse_symbol(symbol).is_some_and(|(c, _)| c == class)
}

/// Apply the kernel built-in and qualifier tables; pointer parameters of a
/// kernel signature gain `__global`.
pub fn translate_kernel_tokens(sentence: &AbstractSentence, lexicon: &Lexicon) -> AbstractSentence {
    let mut rules: Vec<_> = lexicon
        .kernel_builtin_table
        .iter()
        .chain(&lexicon.kernel_qualifier_table)
        .collect();
    rules.sort_by_key(|r| std::cmp::Reverse(r.from.len()));

    let syms = &sentence.symbols;
    let mut out = Vec::with_capacity(syms.len());
    let mut i = 0;
    let mut kernel_signature = false;
    while i < syms.len() {
        match rules.iter().find(|r| syms[i..].starts_with(&r.from)) {
            Some(rule) => {
                kernel_signature |= rule.to.iter().any(|t| t == "__kernel");
                out.extend(rule.to.iter().cloned());
                i += rule.from.len();
            }
            None => {
                out.push(syms[i].clone());
                i += 1;
            }
        }
    }
    if kernel_signature {
        out = qualify_pointer_params(out);
    }
    AbstractSentence { symbols: out }
}

const ADDRESS_SPACES: &[&str] = &["__global", "__local", "__constant", "__private"];

fn qualify_pointer_params(symbols: Vec<String>) -> Vec<String> {
    let Some(open) = symbols.iter().position(|s| s == "(") else {
        return symbols;
    };
    // parameter spans at depth 1 of the first parenthesis group
    let mut params = Vec::new();
    let mut depth = 0usize;
    let mut start = open + 1;
    let mut close = symbols.len();
    for (i, s) in symbols.iter().enumerate().skip(open) {
        match s.as_str() {
            "(" | "[" => depth += 1,
            ")" | "]" => {
                depth -= 1;
                if depth == 0 {
                    params.push(start..i);
                    close = i;
                    break;
                }
            }
            "," if depth == 1 => {
                params.push(start..i);
                start = i + 1;
            }
            _ => {}
        }
    }
    let is_pointer = |r: &std::ops::Range<usize>| {
        let p = &symbols[r.clone()];
        !p.iter().any(|s| ADDRESS_SPACES.contains(&s.as_str()))
            && p.windows(2)
                .any(|w| is_class(&w[0], SymbolClass::Tp) && is_class(&w[1], SymbolClass::Op))
    };
    let starts: Vec<usize> = params
        .iter()
        .filter(|r| is_pointer(r))
        .map(|r| r.start)
        .collect();
    let mut out = Vec::with_capacity(symbols.len() + starts.len());
    for (i, s) in symbols.into_iter().enumerate() {
        if i <= close && starts.contains(&i) {
            out.push("__global".to_string());
        }
        out.push(s);
    }
    out
}

/// Split `symbols` at depth-0 commas.
fn split_args(symbols: &[String]) -> Vec<&[String]> {
    if symbols.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, s) in symbols.iter().enumerate() {
        match s.as_str() {
            "(" | "[" => depth += 1,
            ")" | "]" => depth = depth.saturating_sub(1),
            "," if depth == 0 => {
                out.push(&symbols[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&symbols[start..]);
    out
}

/// `k <<< g , b >>> ( a0 , a1 ) ;` as `_clSetKernelArg` calls followed by
/// `_clEnqueueNDRangeKernel`, joined with `_br`. Launches with a shared
/// memory size or stream argument are not expanded.
pub fn expand_kernel_launch(sentence: &AbstractSentence) -> Option<AbstractSentence> {
    let syms = &sentence.symbols;
    let open = syms.iter().position(|s| s == "<<<")?;
    let close = syms.iter().position(|s| s == ">>>")?;
    if open != 1 || close < open || syms.get(close + 1)? != "(" {
        return None;
    }
    let name = format!("\"{}\"", syms[0]);
    let config = split_args(&syms[open + 1..close]);
    let [grid, block] = config[..] else {
        return None;
    };
    let args_end = syms
        .len()
        .checked_sub(2)
        .filter(|&e| syms[e] == ")" && syms[e + 1] == ";")?;
    let args_start = close + 2;
    if args_end < args_start {
        return None;
    }
    let args = split_args(&syms[args_start..args_end]);
    if args.iter().any(|a| a.is_empty()) || grid.is_empty() || block.is_empty() {
        return None;
    }

    let mut out: Vec<String> = Vec::new();
    let mut push = |items: &[&str]| out.extend(items.iter().map(|s| s.to_string()));
    for (i, arg) in args.iter().enumerate() {
        push(&["_clSetKernelArg", "(", &name, ",", &i.to_string(), ","]);
        push(&arg.iter().map(String::as_str).collect::<Vec<_>>());
        push(&[")", ";", BREAK]);
    }
    push(&["_clEnqueueNDRangeKernel", "("]);
    push(&grid.iter().map(String::as_str).collect::<Vec<_>>());
    push(&[","]);
    push(&block.iter().map(String::as_str).collect::<Vec<_>>());
    push(&[",", &name, ")", ";"]);
    Some(AbstractSentence { symbols: out })
}

fn carry(unit: &PreprocessedUnit) -> TranslatedUnit {
    TranslatedUnit {
        sentences: unit.sentences.clone(),
        maps: unit.maps.clone(),
        origins: unit.origins.clone(),
        passthrough: unit.passthrough.clone(),
        kernel_regions: unit.kernel_regions.clone(),
        warnings: Vec::new(),
    }
}

fn uncovered(out: &mut TranslatedUnit, slot: usize) {
    out.warnings.push(Warning {
        line: out.origins[slot].first_line,
        message: format!("uncovered sentence left as is: {}", out.sentences[slot]),
    });
}

pub fn translate_unit(
    unit: &PreprocessedUnit,
    backend: &Backend,
    tree: &UsageTree,
    lexicon: &Lexicon,
) -> Result<TranslatedUnit, TranslateError> {
    let mut out = carry(unit);
    match backend {
        Backend::Identity => {}
        Backend::Rule => {
            for m in match_unit(tree, unit) {
                let slot = m.start;
                if m.kernel {
                    out.sentences[slot] = translate_kernel_tokens(&m.sentence, lexicon);
                    continue;
                }
                match &m.result {
                    MatchResult::Matched { usage_id, captures } => {
                        let pair = tree
                            .pair(*usage_id)
                            .ok_or(TranslateError::UnknownUsage(*usage_id))?;
                        out.sentences[slot] = translate_matched(pair, captures)?;
                        out.maps[slot] = m.map.clone();
                        for k in slot + 1..slot + m.len {
                            out.sentences[k] = AbstractSentence::default();
                            out.maps[k] = SymbolMap::default();
                        }
                    }
                    MatchResult::Uncovered => match expand_kernel_launch(&m.sentence) {
                        Some(s) => out.sentences[slot] = s,
                        None => uncovered(&mut out, slot),
                    },
                    MatchResult::NotApplicable => {}
                }
            }
        }
        Backend::External(cmd) => {
            let mut host = Vec::new();
            for (i, s) in unit.sentences.iter().enumerate() {
                if unit.origins[i].is_kernel_context {
                    out.sentences[i] = translate_kernel_tokens(s, lexicon);
                } else if !s.is_untranslated() {
                    host.push(i);
                }
            }
            if !host.is_empty() {
                let sent: Vec<_> = host.iter().map(|&i| unit.sentences[i].clone()).collect();
                for (i, s) in host.into_iter().zip(cmd.run(&sent)?) {
                    out.sentences[i] = s;
                }
            }
        }
    }
    Ok(out)
}
