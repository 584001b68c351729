//! Tokenizer and statement-level sentence assembly for CUDA/OpenCL source.
//!
//! Comments and preprocessor directives never enter the token stream; they
//! are kept as [`PassthroughLine`]s and reinserted by the formatter.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::lexicon::Lexicon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TokenKind {
    Identifier,
    NumericConstant,
    StringLiteral,
    Operator,
    TypeKeyword,
    ApiKeyword,
    ControlKeyword,
    Punctuation,
    KernelLaunchOpen,
    KernelLaunchClose,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub text: String,
    pub kind: TokenKind,
    pub line: usize,
    pub col: usize,
}

impl Token {
    pub fn new(text: impl Into<String>, kind: TokenKind, line: usize, col: usize) -> Self {
        Token {
            text: text.into(),
            kind,
            line,
            col,
        }
    }

    pub fn is(&self, text: &str) -> bool {
        self.text == text
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PassthroughKind {
    Comment,
    Directive,
}

/// A comment or preprocessor directive, kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassthroughLine {
    pub line: usize,
    pub text: String,
    pub kind: PassthroughKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
    pub passthrough: Vec<PassthroughLine>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexError {
    #[error("{line}:{col}: unterminated string or character literal")]
    UnterminatedString { line: usize, col: usize },
    #[error("{line}:{col}: unterminated block comment")]
    UnterminatedComment { line: usize, col: usize },
    #[error("{line}:{col}: unexpected character `{ch}`")]
    UnexpectedCharacter { line: usize, col: usize, ch: char },
    #[error("{line}:{col}: unbalanced delimiter `{text}`")]
    UnbalancedDelimiters {
        line: usize,
        col: usize,
        text: String,
    },
}

impl LexError {
    pub fn line(&self) -> usize {
        match self {
            LexError::UnterminatedString { line, .. }
            | LexError::UnterminatedComment { line, .. }
            | LexError::UnexpectedCharacter { line, .. }
            | LexError::UnbalancedDelimiters { line, .. } => *line,
        }
    }
}

// Longest first within each length class; `<<<`/`>>>` lead so kernel
// launches are never split into shifts.
const OPERATORS_3: &[&str] = &["<<<", ">>>", "<<=", ">>=", "..."];
const OPERATORS_2: &[&str] = &[
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "+=", "-=", "*=", "/=", "%=",
    "&=", "|=", "^=", "**", "::", "##",
];
const OPERATORS_1: &[&str] = &[
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "&", "|", "^", "?", ":", ".", "#",
];
const PUNCTUATION: &[&str] = &["(", ")", "[", "]", "{", "}", ",", ";"];

pub fn is_operator_text(text: &str) -> bool {
    OPERATORS_3.contains(&text) && text != "<<<" && text != ">>>"
        || OPERATORS_2.contains(&text)
        || OPERATORS_1.contains(&text)
}

pub fn is_punctuation_text(text: &str) -> bool {
    PUNCTUATION.contains(&text)
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    lexicon: &'a Lexicon,
    at_line_start: bool,
}

impl Cursor<'_> {
    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
            self.at_line_start = true;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek(i) == Some(c))
    }

    fn take_while(&mut self, out: &mut String, pred: impl Fn(char) -> bool) {
        while let Some(c) = self.peek(0) {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Split source text into tokens, setting comments and directives aside.
pub fn tokenize(source: &str, lexicon: &Lexicon) -> Result<TokenStream, LexError> {
    let mut cur = Cursor {
        chars: source.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
        lexicon,
        at_line_start: true,
    };
    let mut out = TokenStream::default();

    while let Some(c) = cur.peek(0) {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let (line, col) = (cur.line, cur.col);

        if cur.starts_with("//") {
            let mut text = String::new();
            cur.take_while(&mut text, |c| c != '\n');
            out.passthrough.push(PassthroughLine {
                line,
                text: text.trim_end().to_string(),
                kind: PassthroughKind::Comment,
            });
            continue;
        }
        if cur.starts_with("/*") {
            let mut text = String::from("/*");
            cur.bump();
            cur.bump();
            loop {
                if cur.starts_with("*/") {
                    cur.bump();
                    cur.bump();
                    text.push_str("*/");
                    break;
                }
                match cur.bump() {
                    Some(c) => text.push(c),
                    None => return Err(LexError::UnterminatedComment { line, col }),
                }
            }
            cur.at_line_start = false;
            out.passthrough.push(PassthroughLine {
                line,
                text,
                kind: PassthroughKind::Comment,
            });
            continue;
        }
        if c == '#' && cur.at_line_start {
            out.passthrough.push(PassthroughLine {
                line,
                text: lex_directive(&mut cur),
                kind: PassthroughKind::Directive,
            });
            continue;
        }

        cur.at_line_start = false;
        let token = if is_ident_start(c) {
            lex_word(&mut cur)
        } else if c.is_ascii_digit()
            || (c == '.' && cur.peek(1).is_some_and(|d| d.is_ascii_digit()))
        {
            Token::new(lex_number(&mut cur), TokenKind::NumericConstant, line, col)
        } else if c == '"' || c == '\'' {
            Token::new(lex_quoted(&mut cur)?, TokenKind::StringLiteral, line, col)
        } else {
            lex_symbol(&mut cur)?
        };
        out.tokens.push(token);
    }
    Ok(out)
}

fn lex_directive(cur: &mut Cursor<'_>) -> String {
    let mut text = String::new();
    while let Some(c) = cur.peek(0) {
        if c == '\n' {
            if text.ends_with('\\') {
                text.push('\n');
                cur.bump();
                continue;
            }
            break;
        }
        text.push(c);
        cur.bump();
    }
    text.trim_end().to_string()
}

fn lex_word(cur: &mut Cursor<'_>) -> Token {
    let (line, col) = (cur.line, cur.col);
    let mut word = String::new();
    cur.take_while(&mut word, is_ident_continue);

    // `threadIdx.x` and friends stay one token.
    if cur.peek(0) == Some('.') && cur.peek(1).is_some_and(is_ident_start) {
        let mut member = String::new();
        let mut i = 1;
        while let Some(c) = cur.peek(i).filter(|c| is_ident_continue(*c)) {
            member.push(c);
            i += 1;
        }
        let dotted = format!("{word}.{member}");
        if cur.lexicon.is_dotted_head(&dotted) {
            for _ in 0..i {
                cur.bump();
            }
            word = dotted;
        }
    }
    let kind = cur.lexicon.classify_word(&word);
    Token::new(word, kind, line, col)
}

fn lex_number(cur: &mut Cursor<'_>) -> String {
    let mut text = String::new();
    let hex = cur.starts_with("0x") || cur.starts_with("0X");
    while let Some(c) = cur.peek(0) {
        let exponent_sign = (c == '+' || c == '-')
            && text.ends_with(|p: char| {
                if hex {
                    p == 'p' || p == 'P'
                } else {
                    p == 'e' || p == 'E'
                }
            });
        if c.is_ascii_alphanumeric() || c == '_' || c == '.' || exponent_sign {
            text.push(c);
            cur.bump();
        } else {
            break;
        }
    }
    text
}

fn lex_quoted(cur: &mut Cursor<'_>) -> Result<String, LexError> {
    let (line, col) = (cur.line, cur.col);
    let quote = cur.bump().expect("caller checked quote");
    let mut text = String::from(quote);
    loop {
        match cur.peek(0) {
            None | Some('\n') => return Err(LexError::UnterminatedString { line, col }),
            Some('\\') => {
                text.push('\\');
                cur.bump();
                match cur.bump() {
                    Some(c) => text.push(c),
                    None => return Err(LexError::UnterminatedString { line, col }),
                }
            }
            Some(c) => {
                text.push(c);
                cur.bump();
                if c == quote {
                    return Ok(text);
                }
            }
        }
    }
}

fn lex_symbol(cur: &mut Cursor<'_>) -> Result<Token, LexError> {
    let (line, col) = (cur.line, cur.col);
    for table in [OPERATORS_3, OPERATORS_2, OPERATORS_1, PUNCTUATION] {
        if let Some(op) = table.iter().find(|op| cur.starts_with(op)) {
            for _ in 0..op.len() {
                cur.bump();
            }
            let kind = match *op {
                "<<<" => TokenKind::KernelLaunchOpen,
                ">>>" => TokenKind::KernelLaunchClose,
                _ if is_punctuation_text(op) => TokenKind::Punctuation,
                _ => TokenKind::Operator,
            };
            return Ok(Token::new(*op, kind, line, col));
        }
    }
    Err(LexError::UnexpectedCharacter {
        line,
        col,
        ch: cur.peek(0).unwrap_or('\0'),
    })
}

/// How kernel code is located when classifying sentences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Context {
    Host,
    Kernel,
    #[default]
    Auto,
}

/// One statement: the unit of translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    pub first_line: usize,
    pub last_line: usize,
    pub translatable: bool,
    pub is_kernel_context: bool,
}

impl Sentence {
    fn from_tokens(tokens: Vec<Token>) -> Self {
        let first_line = tokens.first().map_or(0, |t| t.line);
        let last_line = tokens.last().map_or(0, |t| t.line);
        Sentence {
            tokens,
            first_line,
            last_line,
            translatable: false,
            is_kernel_context: false,
        }
    }

    pub fn texts(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.text.as_str())
    }

    /// Space-separated token texts.
    pub fn joined(&self) -> String {
        self.texts().collect::<Vec<_>>().join(" ")
    }

    pub fn is_open_brace(&self) -> bool {
        self.tokens.len() == 1 && self.tokens[0].is("{")
    }

    pub fn is_close_brace(&self) -> bool {
        self.tokens.len() == 1 && self.tokens[0].is("}")
    }
}

const HEADER_KEYWORDS: &[&str] = &["for", "while", "if", "switch"];

#[derive(Default)]
struct Assembler {
    sentences: Vec<Sentence>,
    current: Vec<Token>,
    paren_depth: usize,
    init_depth: usize,
    brace_depth: usize,
    // a control header's closing `)` (or a bare `else`/`do`) was just seen
    header_closed: bool,
}

impl Assembler {
    fn flush(&mut self) {
        if !self.current.is_empty() {
            let tokens = std::mem::take(&mut self.current);
            self.sentences.push(Sentence::from_tokens(tokens));
        }
        self.header_closed = false;
    }

    fn header_keyword(&self) -> Option<&str> {
        self.current
            .iter()
            .map(|t| t.text.as_str())
            .find(|t| *t != "else")
    }

    fn is_initializer_brace(&self) -> bool {
        self.paren_depth > 0
            || self.init_depth > 0
            || self
                .current
                .last()
                .is_some_and(|t| t.is("=") || t.is("return") || t.is(","))
    }

    fn push(&mut self, tok: Token) -> Result<(), LexError> {
        if self.header_closed {
            if tok.is("{") || tok.is(";") {
                let brace = tok.is("{");
                self.current.push(tok);
                if brace {
                    self.brace_depth += 1;
                }
                self.flush();
                return Ok(());
            }
            let continues_else =
                tok.is("if") && self.current.len() == 1 && self.current[0].is("else");
            if !continues_else {
                self.flush();
            }
            self.header_closed = false;
        }

        match tok.text.as_str() {
            "(" | "[" => {
                self.paren_depth += 1;
                self.current.push(tok);
            }
            ")" | "]" => {
                if self.paren_depth == 0 {
                    return Err(unbalanced(&tok));
                }
                self.paren_depth -= 1;
                self.current.push(tok);
                if self.paren_depth == 0
                    && self
                        .header_keyword()
                        .is_some_and(|k| HEADER_KEYWORDS.contains(&k))
                    && self.current.last().is_some_and(|t| t.is(")"))
                    && self.first_header_paren_closed()
                {
                    self.header_closed = true;
                }
            }
            "{" if self.is_initializer_brace() => {
                self.init_depth += 1;
                self.current.push(tok);
            }
            "{" => {
                self.flush();
                self.brace_depth += 1;
                self.current.push(tok);
                self.flush();
            }
            "}" if self.init_depth > 0 => {
                self.init_depth -= 1;
                self.current.push(tok);
            }
            "}" => {
                if self.brace_depth == 0 || self.paren_depth > 0 {
                    return Err(unbalanced(&tok));
                }
                self.brace_depth -= 1;
                self.flush();
                self.current.push(tok);
                self.flush();
            }
            ";" if self.paren_depth == 0 && self.init_depth == 0 => {
                self.current.push(tok);
                self.flush();
            }
            "else" | "do" if self.current.is_empty() => {
                self.current.push(tok);
                self.header_closed = true;
            }
            _ => self.current.push(tok),
        }
        Ok(())
    }

    /// True when the `)` just pushed closes the header's first parenthesis
    /// group (`for (...)`), not a later one.
    fn first_header_paren_closed(&self) -> bool {
        let mut depth = 0usize;
        let mut groups = 0usize;
        for t in &self.current {
            match t.text.as_str() {
                "(" | "[" => depth += 1,
                ")" | "]" => {
                    depth -= 1;
                    if depth == 0 {
                        groups += 1;
                    }
                }
                _ => {}
            }
        }
        groups == 1
    }
}

fn unbalanced(tok: &Token) -> LexError {
    LexError::UnbalancedDelimiters {
        line: tok.line,
        col: tok.col,
        text: tok.text.clone(),
    }
}

/// Group tokens into statement sentences and classify them (auto context).
pub fn assemble_sentences(tokens: &[Token], lexicon: &Lexicon) -> Result<Vec<Sentence>, LexError> {
    let mut asm = Assembler::default();
    for tok in tokens {
        asm.push(tok.clone())?;
    }
    if asm.paren_depth > 0 || asm.brace_depth > 0 || asm.init_depth > 0 {
        let last = tokens.last().expect("nonzero depth implies tokens");
        return Err(LexError::UnbalancedDelimiters {
            line: last.line,
            col: last.col,
            text: "<end of input>".into(),
        });
    }
    asm.flush();
    let mut sentences = asm.sentences;
    classify_sentences(&mut sentences, lexicon, Context::Auto);
    Ok(sentences)
}

/// Set `is_kernel_context` and `translatable` on every sentence.
pub fn classify_sentences(sentences: &mut [Sentence], lexicon: &Lexicon, context: Context) {
    match context {
        Context::Host => sentences
            .iter_mut()
            .for_each(|s| s.is_kernel_context = false),
        Context::Kernel => sentences
            .iter_mut()
            .for_each(|s| s.is_kernel_context = true),
        Context::Auto => mark_kernel_regions(sentences, lexicon),
    }

    let device_ptrs = device_pointer_names(sentences, lexicon);
    for s in sentences.iter_mut() {
        s.translatable = if s.is_kernel_context {
            s.tokens.iter().any(|t| lexicon.is_kernel_head(&t.text))
        } else {
            s.tokens
                .iter()
                .any(|t| matches!(t.kind, TokenKind::ApiKeyword | TokenKind::KernelLaunchOpen))
                || is_device_pointer_declaration(s, &device_ptrs)
        };
    }
}

fn mark_kernel_regions(sentences: &mut [Sentence], lexicon: &Lexicon) {
    let mut body_depth: Option<usize> = None;
    let mut depth = 0usize;
    let mut pending_signature = false;
    for s in sentences.iter_mut() {
        let has_qualifier = s
            .tokens
            .iter()
            .any(|t| lexicon.is_kernel_qualifier(&t.text));
        let opens = s.tokens.iter().filter(|t| t.is("{")).count();
        let closes = s.tokens.iter().filter(|t| t.is("}")).count();

        if body_depth.is_none() && s.is_open_brace() && pending_signature {
            body_depth = Some(depth);
        }
        s.is_kernel_context = body_depth.is_some() || has_qualifier;
        pending_signature = has_qualifier && !s.tokens.last().is_some_and(|t| t.is(";"));

        depth = depth + opens - closes.min(depth + opens);
        if body_depth.is_some_and(|d| depth <= d) && (s.is_close_brace() || closes > 0) {
            body_depth = None;
        }
    }
}

/// Names passed by address as the first argument of an allocation API.
fn device_pointer_names(sentences: &[Sentence], lexicon: &Lexicon) -> HashSet<String> {
    let mut names = HashSet::new();
    for s in sentences.iter().filter(|s| !s.is_kernel_context) {
        let toks = &s.tokens;
        for (i, t) in toks.iter().enumerate() {
            if !lexicon.device_allocators.contains(&t.text)
                || !toks.get(i + 1).is_some_and(|p| p.is("("))
            {
                continue;
            }
            let mut depth = 0usize;
            for w in toks[i + 1..].windows(2) {
                match w[0].text.as_str() {
                    "(" | "[" => depth += 1,
                    ")" | "]" => depth -= 1,
                    "," if depth == 1 => break,
                    _ => {}
                }
                if depth == 0 {
                    break;
                }
                if w[0].is("&") && w[1].kind == TokenKind::Identifier {
                    names.insert(w[1].text.clone());
                }
            }
        }
    }
    names
}

fn is_device_pointer_declaration(s: &Sentence, device_ptrs: &HashSet<String>) -> bool {
    let mut toks = s
        .tokens
        .iter()
        .skip_while(|t| t.kind == TokenKind::ControlKeyword && !t.is("sizeof"));
    toks.next()
        .is_some_and(|t| t.kind == TokenKind::TypeKeyword)
        && s.tokens.last().is_some_and(|t| t.is(";"))
        && !s.tokens.iter().any(|t| t.is("("))
        && s.tokens
            .iter()
            .any(|t| t.kind == TokenKind::Identifier && device_ptrs.contains(&t.text))
}
