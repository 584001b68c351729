//! Renaming tokens to abstract symbols.
//!
//! Identifiers and literals become `_id<N>`, operators `_op<N>`, type
//! keywords `_tp<N>`. Numbering starts at zero in every sentence and every
//! class independently; a repeated original token reuses its symbol. API
//! keywords, control keywords, punctuation and kernel-launch brackets are
//! kept verbatim because they decide which translation applies.

use std::fmt;

use indexmap::IndexSet;

use crate::lexer::{
    assemble_sentences, classify_sentences, tokenize, Context, LexError, PassthroughLine, Sentence,
    Token, TokenKind,
};
use crate::lexicon::Lexicon;

/// Placeholder for a sentence with nothing to translate.
pub const UNTRANSLATED: &str = "_line_not_to_translate";
/// Separator between statements that translate as one group.
pub const BREAK: &str = "_br";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolClass {
    Id,
    Op,
    Tp,
}

impl SymbolClass {
    pub fn of(kind: TokenKind) -> Option<SymbolClass> {
        match kind {
            TokenKind::Identifier | TokenKind::NumericConstant | TokenKind::StringLiteral => {
                Some(SymbolClass::Id)
            }
            TokenKind::Operator => Some(SymbolClass::Op),
            TokenKind::TypeKeyword => Some(SymbolClass::Tp),
            _ => None,
        }
    }

    pub fn prefix(self) -> &'static str {
        match self {
            SymbolClass::Id => "_id",
            SymbolClass::Op => "_op",
            SymbolClass::Tp => "_tp",
        }
    }

    pub fn symbol(self, index: usize) -> String {
        format!("{}{}", self.prefix(), index)
    }
}

/// Parse `_id3` into `(Id, 3)`. Leading zeros other than `0` itself are rejected.
pub fn parse_symbol(text: &str) -> Option<(SymbolClass, usize)> {
    let (class, digits) = [SymbolClass::Id, SymbolClass::Op, SymbolClass::Tp]
        .into_iter()
        .find_map(|c| text.strip_prefix(c.prefix()).map(|d| (c, d)))?;
    if digits.is_empty()
        || !digits.bytes().all(|b| b.is_ascii_digit())
        || (digits.len() > 1 && digits.starts_with('0'))
    {
        return None;
    }
    digits.parse().ok().map(|n| (class, n))
}

/// Parse `_expr4` into `4`.
pub fn parse_expr_keyword(text: &str) -> Option<usize> {
    let digits = text.strip_prefix("_expr")?;
    if digits.is_empty()
        || !digits.bytes().all(|b| b.is_ascii_digit())
        || (digits.len() > 1 && digits.starts_with('0'))
    {
        return None;
    }
    digits.parse().ok()
}

/// Per-sentence table from abstract symbol index to original token text.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SymbolMap {
    pub id_names: Vec<String>,
    pub op_names: Vec<String>,
    pub tp_names: Vec<String>,
}

impl SymbolMap {
    pub fn names(&self, class: SymbolClass) -> &[String] {
        match class {
            SymbolClass::Id => &self.id_names,
            SymbolClass::Op => &self.op_names,
            SymbolClass::Tp => &self.tp_names,
        }
    }

    pub fn original(&self, symbol: &str) -> Option<&str> {
        let (class, idx) = parse_symbol(symbol)?;
        self.names(class).get(idx).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.id_names.is_empty() && self.op_names.is_empty() && self.tp_names.is_empty()
    }
}

/// Assigns dense per-class indices in first-occurrence order.
#[derive(Debug, Default, Clone)]
pub struct Renamer {
    ids: IndexSet<String>,
    ops: IndexSet<String>,
    tps: IndexSet<String>,
}

impl Renamer {
    pub fn symbol(&mut self, class: SymbolClass, text: &str) -> String {
        let set = match class {
            SymbolClass::Id => &mut self.ids,
            SymbolClass::Op => &mut self.ops,
            SymbolClass::Tp => &mut self.tps,
        };
        let (idx, _) = set.insert_full(text.to_string());
        class.symbol(idx)
    }

    /// Abstract symbol for a token, or its verbatim text if it is not renamed.
    pub fn token(&mut self, token: &Token) -> String {
        match SymbolClass::of(token.kind) {
            Some(class) => self.symbol(class, &token.text),
            None => token.text.clone(),
        }
    }

    pub fn lookup(&self, class: SymbolClass, text: &str) -> Option<String> {
        let set = match class {
            SymbolClass::Id => &self.ids,
            SymbolClass::Op => &self.ops,
            SymbolClass::Tp => &self.tps,
        };
        set.get_index_of(text).map(|i| class.symbol(i))
    }

    pub fn into_map(self) -> SymbolMap {
        SymbolMap {
            id_names: self.ids.into_iter().collect(),
            op_names: self.ops.into_iter().collect(),
            tp_names: self.tps.into_iter().collect(),
        }
    }
}

/// A renamed sentence: abstract symbols plus verbatim keywords and punctuation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbstractSentence {
    pub symbols: Vec<String>,
}

impl AbstractSentence {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Self {
        AbstractSentence {
            symbols: symbols.into_iter().map(Into::into).collect(),
        }
    }

    /// Split a space-separated line.
    pub fn parse(line: &str) -> Self {
        AbstractSentence::new(line.split_whitespace())
    }

    pub fn untranslated() -> Self {
        AbstractSentence::new([UNTRANSLATED])
    }

    pub fn is_untranslated(&self) -> bool {
        self.symbols.len() == 1 && self.symbols[0] == UNTRANSLATED
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl fmt::Display for AbstractSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbols.join(" "))
    }
}

fn rename_tokens<'t>(
    tokens: impl IntoIterator<Item = Option<&'t Token>>,
) -> (AbstractSentence, SymbolMap) {
    let mut renamer = Renamer::default();
    let symbols = tokens
        .into_iter()
        .map(|t| match t {
            Some(t) => renamer.token(t),
            None => BREAK.to_string(),
        })
        .collect();
    (AbstractSentence { symbols }, renamer.into_map())
}

/// Rename one sentence. Untranslatable sentences collapse to the sentinel.
pub fn rename_sentence(sentence: &Sentence) -> (AbstractSentence, SymbolMap) {
    if !sentence.translatable {
        return (AbstractSentence::untranslated(), SymbolMap::default());
    }
    rename_tokens(sentence.tokens.iter().map(Some))
}

/// Rename consecutive sentences jointly, separated by `_br`.
pub fn rename_group(group: &[Sentence]) -> (AbstractSentence, SymbolMap) {
    let tokens = group.iter().enumerate().flat_map(|(i, s)| {
        let sep = (i > 0).then_some(None);
        sep.into_iter().chain(s.tokens.iter().map(Some))
    });
    rename_tokens(tokens)
}

/// A source file after pre-processing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PreprocessedUnit {
    pub origins: Vec<Sentence>,
    pub sentences: Vec<AbstractSentence>,
    pub maps: Vec<SymbolMap>,
    pub passthrough: Vec<PassthroughLine>,
    /// Inclusive line ranges of kernel code.
    pub kernel_regions: Vec<(usize, usize)>,
}

impl PreprocessedUnit {
    pub fn is_kernel_line(&self, line: usize) -> bool {
        self.kernel_regions
            .iter()
            .any(|&(lo, hi)| (lo..=hi).contains(&line))
    }
}

/// tokenize, assemble sentences, classify them, rename each one.
pub fn preprocess_unit(
    source: &str,
    lexicon: &Lexicon,
    context: Context,
) -> Result<PreprocessedUnit, LexError> {
    let stream = tokenize(source, lexicon)?;
    let mut origins = assemble_sentences(&stream.tokens, lexicon)?;
    if context != Context::Auto {
        classify_sentences(&mut origins, lexicon, context);
    }

    let (sentences, maps) = origins.iter().map(rename_sentence).unzip();
    let mut kernel_regions: Vec<(usize, usize)> = Vec::new();
    let mut prev_kernel = false;
    for s in &origins {
        if s.is_kernel_context {
            match kernel_regions.last_mut() {
                Some(region) if prev_kernel => region.1 = s.last_line,
                _ => kernel_regions.push((s.first_line, s.last_line)),
            }
        }
        prev_kernel = s.is_kernel_context;
    }

    Ok(PreprocessedUnit {
        origins,
        sentences,
        maps,
        passthrough: stream.passthrough,
        kernel_regions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(src: &str) -> PreprocessedUnit {
        preprocess_unit(src, &Lexicon::default(), Context::Auto).unwrap()
    }

    fn renamed(src: &str) -> Vec<String> {
        unit(src)
            .sentences
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    #[test]
    fn symbol_parsing() {
        assert_eq!(parse_symbol("_id0"), Some((SymbolClass::Id, 0)));
        assert_eq!(parse_symbol("_op12"), Some((SymbolClass::Op, 12)));
        assert_eq!(parse_symbol("_tp3"), Some((SymbolClass::Tp, 3)));
        assert_eq!(parse_symbol("_id"), None);
        assert_eq!(parse_symbol("_id01"), None);
        assert_eq!(parse_symbol("_idx"), None);
        assert_eq!(parse_symbol("id0"), None);
        assert_eq!(parse_expr_keyword("_expr2"), Some(2));
        assert_eq!(parse_expr_keyword("_expr"), None);
    }

    #[test]
    fn declaration_renames_per_class() {
        let u = unit("float *A_gpu;\ncudaMalloc((void **)&A_gpu, 8);");
        assert_eq!(u.sentences[0].to_string(), "_tp0 _op0 _id0 ;");
        assert_eq!(u.maps[0].tp_names, ["float"]);
        assert_eq!(u.maps[0].op_names, ["*"]);
        assert_eq!(u.maps[0].id_names, ["A_gpu"]);
    }

    #[test]
    fn memcpy_keeps_api_tokens() {
        let got = renamed("cudaMemcpy(A_gpu, A, sizeof(float) * NI * NK, cudaMemcpyHostToDevice);");
        assert_eq!(
            got,
            ["cudaMemcpy ( _id0 , _id1 , sizeof ( _tp0 ) _op0 _id2 _op0 _id3 , cudaMemcpyHostToDevice ) ;"]
        );
    }

    #[test]
    fn plain_statement_is_not_translated() {
        let u = unit("int i = 0;");
        assert!(u.sentences[0].is_untranslated());
        assert!(u.maps[0].is_empty());
        assert_eq!(u.origins[0].joined(), "int i = 0 ;");
    }

    #[test]
    fn numbering_restarts_each_sentence() {
        let got = renamed("cudaFree(A_gpu);\ncudaFree(B_gpu);\ncudaMemcpy(B_gpu, A_gpu, n, cudaMemcpyDeviceToDevice);");
        assert_eq!(got[0], "cudaFree ( _id0 ) ;");
        assert_eq!(got[1], "cudaFree ( _id0 ) ;");
        assert_eq!(
            got[2],
            "cudaMemcpy ( _id0 , _id1 , _id2 , cudaMemcpyDeviceToDevice ) ;"
        );
    }

    #[test]
    fn string_literal_is_one_id() {
        let u = unit(r#"cudaGetErrorString("bad, very bad");"#);
        assert_eq!(u.sentences[0].to_string(), "cudaGetErrorString ( _id0 ) ;");
        assert_eq!(u.maps[0].id_names, [r#""bad, very bad""#]);
    }

    #[test]
    fn only_comments_yields_no_sentences() {
        let u = unit("// one\n/* two */\n");
        assert!(u.sentences.is_empty() && u.maps.is_empty());
        assert_eq!(u.passthrough.len(), 2);
    }

    #[test]
    fn group_renaming_spans_statements() {
        let u = unit("float *A_gpu;\ncudaMalloc((void **)&A_gpu, n);");
        let (group, map) = rename_group(&u.origins);
        assert_eq!(
            group.to_string(),
            "_tp0 _op0 _id0 ; _br cudaMalloc ( ( _tp1 _op1 ) _op2 _id0 , _id1 ) ;"
        );
        assert_eq!(map.id_names, ["A_gpu", "n"]);
    }

    #[test]
    fn kernel_regions_cover_kernel_functions() {
        let u =
            unit("int g;\n__global__ void k(float *a)\n{\n  a[0] = threadIdx.x;\n}\nvoid h() {}\n");
        assert_eq!(u.kernel_regions, [(2, 5)]);
        assert!(u.is_kernel_line(3));
        assert!(!u.is_kernel_line(6));
    }

    #[test]
    fn forced_host_context() {
        let u =
            preprocess_unit("int j = threadIdx.x;", &Lexicon::default(), Context::Host).unwrap();
        assert!(u.kernel_regions.is_empty());
        let u =
            preprocess_unit("int j = threadIdx.x;", &Lexicon::default(), Context::Kernel).unwrap();
        assert_eq!(u.kernel_regions, [(1, 1)]);
        assert_eq!(u.sentences[0].to_string(), "_tp0 _id0 _op0 threadIdx.x ;");
    }
}
