//! Name restoration and source formatting.

use thiserror::Error;

use crate::abstraction::{parse_expr_keyword, parse_symbol, AbstractSentence, SymbolMap, BREAK};
use crate::lexer::{is_operator_text, PassthroughKind, PassthroughLine, Sentence};
use crate::translate::TranslatedUnit;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RestoreError {
    #[error("line {line}: `{symbol}` has no original name in `{sentence}`")]
    DanglingSymbol {
        line: usize,
        symbol: String,
        sentence: String,
    },
}

/// A restored sentence, one token list per output statement (a `_br`
/// group restores to several).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Restored {
    pub lines: Vec<Vec<String>>,
}

impl Restored {
    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.lines.iter().flatten().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.lines.iter().all(Vec::is_empty)
    }
}

fn restore_symbol(symbol: &str, map: &SymbolMap) -> Option<String> {
    if parse_symbol(symbol).is_some() {
        return map.original(symbol).map(str::to_string);
    }
    if parse_expr_keyword(symbol).is_some() {
        return None;
    }
    // `"_id0"`: a name turned into a string literal
    if let Some(inner) = symbol.strip_prefix('"').and_then(|s| s.strip_suffix('"')) {
        if parse_symbol(inner).is_some() {
            let name = map.original(inner)?;
            return Some(if name.starts_with('"') {
                name.to_string()
            } else {
                format!("\"{name}\"")
            });
        }
    }
    Some(symbol.to_string())
}

/// Replace abstract symbols with original names. The untranslated sentinel
/// yields the origin tokens.
pub fn restore_names(
    sentence: &AbstractSentence,
    map: &SymbolMap,
    origin: &Sentence,
) -> Result<Restored, RestoreError> {
    if sentence.is_untranslated() {
        return Ok(Restored {
            lines: vec![origin.texts().map(str::to_string).collect()],
        });
    }
    let mut lines = vec![Vec::new()];
    for symbol in &sentence.symbols {
        if symbol == BREAK {
            lines.push(Vec::new());
            continue;
        }
        let text = restore_symbol(symbol, map).ok_or_else(|| RestoreError::DanglingSymbol {
            line: origin.first_line,
            symbol: symbol.clone(),
            sentence: sentence.to_string(),
        })?;
        lines.last_mut().unwrap().push(text);
    }
    lines.retain(|l| !l.is_empty());
    Ok(Restored { lines })
}

/// A restored sentence positioned at its source lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placed {
    pub restored: Restored,
    pub first_line: usize,
    pub last_line: usize,
    pub kernel: bool,
}

/// Restore every slot. A sentence whose restoration fails keeps its
/// original tokens, and the error is returned alongside.
pub fn restore_unit(unit: &TranslatedUnit) -> (Vec<Placed>, Vec<RestoreError>) {
    let mut placed: Vec<Placed> = Vec::new();
    let mut errors = Vec::new();
    for ((sentence, map), origin) in unit.sentences.iter().zip(&unit.maps).zip(&unit.origins) {
        if sentence.is_empty() {
            // absorbed into the previous group
            if let Some(prev) = placed.last_mut() {
                prev.last_line = prev.last_line.max(origin.last_line);
            }
            continue;
        }
        let restored = restore_names(sentence, map, origin).unwrap_or_else(|e| {
            errors.push(e);
            Restored {
                lines: vec![origin.texts().map(str::to_string).collect()],
            }
        });
        placed.push(Placed {
            restored,
            first_line: origin.first_line,
            last_line: origin.last_line,
            kernel: origin.is_kernel_context,
        });
    }
    (placed, errors)
}

const INDENT: &str = "    ";

fn is_word(t: &str) -> bool {
    t.starts_with(|c: char| c.is_alphanumeric() || c == '_')
        || t.starts_with('"')
        || t.starts_with('\'')
}

const SPACED_BEFORE_PAREN: &[&str] = &[
    "for", "if", "while", "switch", "return", "else", "do", "case",
];

fn needs_space(prev: &str, next: &str) -> bool {
    if matches!(next, ";" | "," | ")" | "]") || matches!(prev, "(" | "[") {
        return false;
    }
    if matches!(next, "." | "->") || matches!(prev, "." | "->") {
        return false;
    }
    if next == "(" {
        return !((is_word(prev)
            && !SPACED_BEFORE_PAREN.contains(&prev)
            && !is_operator_text(prev))
            || matches!(prev, ")" | "]"));
    }
    if next == "[" {
        return !(is_word(prev) || matches!(prev, ")" | "]"));
    }
    if matches!(next, "++" | "--") {
        let numeric = prev.starts_with(|c: char| c.is_ascii_digit());
        return !((is_word(prev) && !numeric) || matches!(prev, ")" | "]"));
    }
    true
}

/// Join tokens with the layout rules of the formatter.
pub fn join_tokens<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        let t = t.as_ref();
        if i > 0 && needs_space(tokens[i - 1].as_ref(), t) {
            out.push(' ');
        }
        out.push_str(t);
    }
    out
}

enum Element<'a> {
    Code(&'a Placed),
    Pass(&'a PassthroughLine),
}

impl Element<'_> {
    fn span(&self) -> (usize, usize) {
        match self {
            Element::Code(p) => (p.first_line, p.last_line),
            Element::Pass(p) => (p.line, p.line + p.text.matches('\n').count()),
        }
    }
}

/// Lay out restored sentences with passthrough lines: one statement per
/// line, four spaces per brace level, `{` on the line it opens, and one
/// blank line wherever the source had a gap. An empty unit formats to "".
pub fn format_unit(placed: &[Placed], passthrough: &[PassthroughLine]) -> String {
    let mut elements = Vec::with_capacity(placed.len() + passthrough.len());
    let mut pass = passthrough.iter().peekable();
    for p in placed {
        while let Some(pt) = pass.next_if(|pt| pt.line < p.first_line) {
            elements.push(Element::Pass(pt));
        }
        elements.push(Element::Code(p));
    }
    elements.extend(pass.map(Element::Pass));

    let mut out: Vec<String> = Vec::new();
    // index in `out` of the last code line, if nothing followed it
    let mut open_code_line: Option<usize> = None;
    let mut depth = 0usize;
    let mut prev_end: Option<usize> = None;

    for e in &elements {
        let (first, last) = e.span();
        if prev_end.is_some_and(|end| first > end + 1) {
            out.push(String::new());
            open_code_line = None;
        }
        prev_end = Some(prev_end.map_or(last, |end| end.max(last)));

        match e {
            Element::Pass(pt) => {
                let indent = match pt.kind {
                    PassthroughKind::Directive => String::new(),
                    PassthroughKind::Comment => INDENT.repeat(depth),
                };
                out.push(format!("{indent}{}", pt.text));
                open_code_line = None;
            }
            Element::Code(p) => {
                for line in &p.restored.lines {
                    if line.is_empty() {
                        continue;
                    }
                    let lone_open = line.len() == 1 && line[0] == "{";
                    if let (true, Some(i)) = (lone_open, open_code_line) {
                        out[i].push_str(" {");
                        depth += 1;
                        open_code_line = None;
                        continue;
                    }
                    let leading_close = line.iter().take_while(|t| *t == "}").count();
                    let opens = line.iter().filter(|t| *t == "{").count();
                    let closes = line.iter().filter(|t| *t == "}").count();
                    depth = depth.saturating_sub(leading_close);
                    out.push(format!("{}{}", INDENT.repeat(depth), join_tokens(line)));
                    depth = (depth + opens).saturating_sub(closes - leading_close);
                    let last = line.last().map(String::as_str);
                    open_code_line =
                        (!matches!(last, Some(";" | "{" | "}"))).then_some(out.len() - 1);
                }
            }
        }
    }
    if out.is_empty() {
        return String::new();
    }
    let mut text = out.join("\n");
    text.push('\n');
    text
}

/// Host and kernel text of a translated unit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SplitOutput {
    pub host: String,
    pub kernel: String,
}

fn in_regions(regions: &[(usize, usize)], line: usize) -> bool {
    regions.iter().any(|&(lo, hi)| (lo..=hi).contains(&line))
}

fn is_define(text: &str) -> bool {
    let body = text.trim_start_matches('#').trim_start();
    body.starts_with("define") || body.starts_with("undef")
}

/// Format kernel sentences and host sentences into separate files.
/// `#define`/`#undef` lines go to both; other directives stay with the
/// host; comments follow the code region they sit in.
pub fn split_unit(unit: &TranslatedUnit, placed: &[Placed]) -> SplitOutput {
    let (kernel, host): (Vec<Placed>, Vec<Placed>) = placed.iter().cloned().partition(|p| p.kernel);
    let mut host_pass = Vec::new();
    let mut kernel_pass = Vec::new();
    for pt in &unit.passthrough {
        match pt.kind {
            PassthroughKind::Directive if is_define(&pt.text) => {
                host_pass.push(pt.clone());
                kernel_pass.push(pt.clone());
            }
            PassthroughKind::Directive => host_pass.push(pt.clone()),
            PassthroughKind::Comment if in_regions(&unit.kernel_regions, pt.line) => {
                kernel_pass.push(pt.clone())
            }
            PassthroughKind::Comment => host_pass.push(pt.clone()),
        }
    }
    SplitOutput {
        host: format_unit(&host, &host_pass),
        kernel: if kernel.is_empty() {
            String::new()
        } else {
            format_unit(&kernel, &kernel_pass)
        },
    }
}
