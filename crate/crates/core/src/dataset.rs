//! Corpus harvesting, expression-node permutation, and dataset files.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use indexmap::IndexSet;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::abstraction::{
    parse_symbol, preprocess_unit, AbstractSentence, Renamer, BREAK, UNTRANSLATED,
};
use crate::lexer::{Context, LexError};
use crate::lexicon::Lexicon;
use crate::usage_tree::{
    captured_exprs, match_unit, CapturedExpr, ExprStore, ExprToken, MatchResult, SourceItem,
    TargetItem, UsageError, UsagePair, UsageTree,
};

pub const DEFAULT_CAP: usize = 10_000;
pub const STATS_HEADER: [&str; 4] = [
    "Benchmark",
    "# application",
    "# sentences found",
    "# sentences generated",
];

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{line}: {source}", line = source.line())]
    Lex { path: PathBuf, source: LexError },
    #[error("{path}: {source}")]
    Capture { path: PathBuf, source: UsageError },
    #[error("{path}:{line}: {reason}")]
    Stats {
        path: PathBuf,
        line: usize,
        reason: String,
    },
}

impl DatasetError {
    fn io(path: &Path, source: io::Error) -> Self {
        DatasetError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UncoveredEntry {
    pub path: PathBuf,
    pub line: usize,
    pub sentence: AbstractSentence,
}

#[derive(Debug, Default)]
pub struct Harvest {
    pub store: ExprStore,
    pub uncovered: Vec<UncoveredEntry>,
    /// Matched slots, counting repeats.
    pub occurrences: usize,
    pub failures: Vec<DatasetError>,
}

impl Harvest {
    /// Distinct matched sentences.
    pub fn found(&self) -> usize {
        self.store.found_count()
    }

    pub fn merge(&mut self, other: Harvest) {
        self.store.merge(other.store);
        self.uncovered.extend(other.uncovered);
        self.occurrences += other.occurrences;
        self.failures.extend(other.failures);
    }
}

/// Harvest one source text.
pub fn harvest_source(path: &Path, source: &str, tree: &UsageTree, lexicon: &Lexicon) -> Harvest {
    let mut out = Harvest::default();
    let unit = match preprocess_unit(source, lexicon, Context::Auto) {
        Ok(u) => u,
        Err(source) => {
            out.failures.push(DatasetError::Lex {
                path: path.to_path_buf(),
                source,
            });
            return out;
        }
    };
    for m in match_unit(tree, &unit) {
        match &m.result {
            MatchResult::Matched { usage_id, .. } => {
                out.occurrences += 1;
                let caps = captured_exprs(&m, &unit);
                if let Err(source) = out.store.record(*usage_id, &m.sentence, caps) {
                    out.failures.push(DatasetError::Capture {
                        path: path.to_path_buf(),
                        source,
                    });
                }
            }
            MatchResult::Uncovered => out.uncovered.push(UncoveredEntry {
                path: path.to_path_buf(),
                line: unit.origins[m.start].first_line,
                sentence: m.sentence.clone(),
            }),
            MatchResult::NotApplicable => {}
        }
    }
    out
}

/// Harvest files in parallel on the current rayon pool; results merge in
/// the order of `paths`.
pub fn harvest_corpus(paths: &[PathBuf], tree: &UsageTree, lexicon: &Lexicon) -> Harvest {
    let parts: Vec<Harvest> = paths
        .par_iter()
        .map(|path| match fs::read_to_string(path) {
            Ok(text) => harvest_source(path, &text, tree, lexicon),
            Err(e) => Harvest {
                failures: vec![DatasetError::io(path, e)],
                ..Harvest::default()
            },
        })
        .collect();
    let mut all = Harvest::default();
    for p in parts {
        all.merge(p);
    }
    all
}

fn is_cuda_source(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("cu" | "cuh")
    )
}

/// All `.cu`/`.cuh` files under `root`, sorted. A file path is returned as is.
pub fn collect_sources(root: &Path) -> Result<Vec<PathBuf>, DatasetError> {
    if root.is_file() {
        return Ok(vec![root.to_path_buf()]);
    }
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).map_err(|e| DatasetError::io(&dir, e))? {
            let path = entry.map_err(|e| DatasetError::io(&dir, e))?.path();
            if path.is_dir() {
                stack.push(path);
            } else if is_cuda_source(&path) {
                out.push(path);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Applications in a benchmark: subdirectories holding CUDA sources, plus
/// CUDA files directly in the benchmark directory.
pub fn count_applications(root: &Path, sources: &[PathBuf]) -> usize {
    let tops: BTreeSet<_> = sources
        .iter()
        .filter_map(|p| p.strip_prefix(root).ok())
        .filter_map(|rel| rel.components().next())
        .collect();
    tops.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermuteOptions {
    pub cap: Option<usize>,
    pub seed: u64,
    pub dedup: bool,
    /// Off: emit each distinct matched sentence once instead of products.
    pub permute: bool,
}

impl Default for PermuteOptions {
    fn default() -> Self {
        PermuteOptions {
            cap: Some(DEFAULT_CAP),
            seed: 0,
            dedup: true,
            permute: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub source: Vec<AbstractSentence>,
    pub target: Vec<AbstractSentence>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    fn push(
        &mut self,
        seen: Option<&mut IndexSet<(String, String)>>,
        src: AbstractSentence,
        tgt: AbstractSentence,
    ) {
        if let Some(seen) = seen {
            if !seen.insert((src.to_string(), tgt.to_string())) {
                return;
            }
        }
        self.source.push(src);
        self.target.push(tgt);
    }

    pub fn vocab_source(&self) -> BTreeSet<String> {
        vocab(&self.source)
    }

    pub fn vocab_target(&self) -> BTreeSet<String> {
        vocab(&self.target)
    }
}

fn vocab(sentences: &[AbstractSentence]) -> BTreeSet<String> {
    let mut v: BTreeSet<String> = sentences
        .iter()
        .flat_map(|s| s.symbols.iter().cloned())
        .collect();
    v.insert(UNTRANSLATED.to_string());
    v
}

// Keys for pattern literals cannot collide with source text.
fn bound_key(symbol: &str) -> String {
    format!("\0{symbol}")
}

fn expr_symbols(renamer: &mut Renamer, capture: &CapturedExpr) -> Vec<String> {
    capture
        .iter()
        .map(|t| match t {
            ExprToken::Verbatim(text) => text.clone(),
            ExprToken::Named(class, text) => renamer.symbol(*class, text),
            ExprToken::Bound(sym) => match parse_symbol(sym) {
                Some((class, _)) => renamer.symbol(class, &bound_key(sym)),
                None => sym.clone(),
            },
        })
        .collect()
}

/// Substitute one capture per `_expr` into both sides of a usage and
/// renumber the result.
pub fn instantiate(
    pair: &UsagePair,
    captures: &[&CapturedExpr],
) -> (AbstractSentence, AbstractSentence) {
    let mut renamer = Renamer::default();
    let mut src = Vec::new();
    for item in &pair.source {
        match item {
            SourceItem::Literal(l) => match &l.origin {
                Some((class, _)) => src.push(renamer.symbol(*class, &bound_key(&l.symbol))),
                None => src.push(l.symbol.clone()),
            },
            SourceItem::Expr(k) => src.extend(expr_symbols(&mut renamer, captures[*k])),
            SourceItem::Br => src.push(BREAK.to_string()),
        }
    }
    let mut tgt = Vec::new();
    for item in &pair.target {
        match item {
            TargetItem::Literal(l) => match &l.origin {
                Some((class, _)) => tgt.push(renamer.symbol(*class, &bound_key(&l.symbol))),
                None => tgt.push(l.symbol.clone()),
            },
            TargetItem::Expr(k) => tgt.extend(expr_symbols(&mut renamer, captures[*k])),
            TargetItem::ExprString(k) => tgt.push(format!(
                "\"{}\"",
                expr_symbols(&mut renamer, captures[*k]).join(" ")
            )),
            TargetItem::Br => tgt.push(BREAK.to_string()),
        }
    }
    (
        AbstractSentence { symbols: src },
        AbstractSentence { symbols: tgt },
    )
}

/// Combination indices for node sizes `sizes`, last node varying fastest.
fn decode(mut linear: usize, sizes: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; sizes.len()];
    for (d, &n) in digits.iter_mut().zip(sizes).rev() {
        *d = linear % n;
        linear /= n;
    }
    digits
}

fn combinations(sizes: &[usize], cap: Option<usize>, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let total = sizes.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n));
    match (total, cap) {
        (Some(t), Some(c)) if t > c => {
            let mut picks = index::sample(rng, t, c).into_vec();
            picks.sort_unstable();
            picks.into_iter().map(|i| decode(i, sizes)).collect()
        }
        (Some(t), _) => (0..t).map(|i| decode(i, sizes)).collect(),
        (None, cap) => {
            // More combinations than usize can count: draw tuples directly.
            let c = cap.unwrap_or(DEFAULT_CAP);
            let mut picked = BTreeSet::new();
            while picked.len() < c {
                picked.insert(
                    sizes
                        .iter()
                        .map(|&n| rng.gen_range(0..n))
                        .collect::<Vec<_>>(),
                );
            }
            picked.into_iter().collect()
        }
    }
}

/// Emit the dataset for the captures in `store`, usage by usage.
pub fn permute_expressions(tree: &UsageTree, store: &ExprStore, opts: &PermuteOptions) -> Dataset {
    let mut out = Dataset::default();
    let mut seen = IndexSet::new();
    let mut seen = opts.dedup.then_some(&mut seen);

    if !opts.permute {
        for (_, usage_id, caps) in store.found() {
            if let Some(pair) = tree.pair(usage_id) {
                let refs: Vec<&CapturedExpr> = caps.iter().collect();
                let (s, t) = instantiate(pair, &refs);
                out.push(seen.as_deref_mut(), s, t);
            }
        }
        return out;
    }

    for pair in tree.pairs() {
        let n = pair.expr_count();
        if n == 0 {
            if store.is_matched(pair.usage_id) {
                let (s, t) = instantiate(pair, &[]);
                out.push(seen.as_deref_mut(), s, t);
            }
            continue;
        }
        let lists: Vec<Vec<&CapturedExpr>> =
            (0..n).map(|k| store.captures(pair.usage_id, k)).collect();
        if lists.iter().any(Vec::is_empty) {
            continue;
        }
        let sizes: Vec<usize> = lists.iter().map(Vec::len).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(
            opts.seed ^ (pair.usage_id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        for combo in combinations(&sizes, opts.cap, &mut rng) {
            let caps: Vec<&CapturedExpr> = combo
                .iter()
                .enumerate()
                .map(|(k, &i)| lists[k][i])
                .collect();
            let (s, t) = instantiate(pair, &caps);
            out.push(seen.as_deref_mut(), s, t);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatsRow {
    pub name: String,
    pub applications: usize,
    pub found: usize,
    pub generated: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetStats {
    pub rows: Vec<StatsRow>,
    pub total: StatsRow,
}

impl DatasetStats {
    pub fn to_tsv(&self) -> String {
        let mut out = STATS_HEADER.join("\t");
        out.push('\n');
        for r in self.rows.iter().chain([&self.total]) {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                r.name, r.applications, r.found, r.generated
            );
        }
        out
    }

    pub fn parse_tsv(path: &Path, text: &str) -> Result<DatasetStats, DatasetError> {
        let bad = |line: usize, reason: &str| DatasetError::Stats {
            path: path.to_path_buf(),
            line,
            reason: reason.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| bad(1, "missing header"))?;
        if header.split('\t').collect::<Vec<_>>() != STATS_HEADER {
            return Err(bad(1, "unexpected header"));
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let f: Vec<_> = line.split('\t').collect();
            let [name, a, b, c] = f[..] else {
                return Err(bad(i + 1, "expected 4 columns"));
            };
            let num = |s: &str| s.parse::<usize>().map_err(|_| bad(i + 1, "not a count"));
            rows.push(StatsRow {
                name: name.to_string(),
                applications: num(a)?,
                found: num(b)?,
                generated: num(c)?,
            });
        }
        let total = rows
            .pop()
            .filter(|r| r.name == "Total")
            .ok_or_else(|| bad(text.lines().count(), "missing Total row"))?;
        Ok(DatasetStats { rows, total })
    }

    /// Column-aligned table for terminals.
    pub fn to_table(&self) -> String {
        let mut cells: Vec<[String; 4]> = vec![STATS_HEADER.map(String::from)];
        for r in self.rows.iter().chain([&self.total]) {
            cells.push([
                r.name.clone(),
                r.applications.to_string(),
                r.found.to_string(),
                r.generated.to_string(),
            ]);
        }
        let widths: Vec<usize> = (0..4)
            .map(|c| cells.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &cells {
            let mut line = format!("{:<w$}", row[0], w = widths[0]);
            for c in 1..4 {
                let _ = write!(line, "  {:>w$}", row[c], w = widths[c]);
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

/// Everything `gen-dataset` writes.
#[derive(Debug, Default)]
pub struct Generated {
    pub dataset: Dataset,
    pub uncovered: Vec<UncoveredEntry>,
    pub stats: Option<DatasetStats>,
    pub failures: Vec<DatasetError>,
}

/// Harvest and permute each benchmark on its own for its stats row, then
/// all of them together for the dataset and the Total row.
pub fn generate(
    benchmarks: &[PathBuf],
    tree: &UsageTree,
    lexicon: &Lexicon,
    opts: &PermuteOptions,
) -> Result<Generated, DatasetError> {
    let mut combined = Harvest::default();
    let mut rows = Vec::new();
    let mut total_apps = 0;
    for root in benchmarks {
        let sources = collect_sources(root)?;
        let apps = if root.is_file() {
            1
        } else {
            count_applications(root, &sources)
        };
        let h = harvest_corpus(&sources, tree, lexicon);
        let generated = permute_expressions(tree, &h.store, opts).len();
        let name = root
            .file_stem()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| root.display().to_string());
        rows.push(StatsRow {
            name,
            applications: apps,
            found: h.found(),
            generated,
        });
        total_apps += apps;
        combined.merge(h);
    }
    let dataset = permute_expressions(tree, &combined.store, opts);
    let total = StatsRow {
        name: "Total".into(),
        applications: total_apps,
        found: combined.found(),
        generated: dataset.len(),
    };
    Ok(Generated {
        dataset,
        uncovered: combined.uncovered,
        stats: Some(DatasetStats { rows, total }),
        failures: combined.failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Split {
    /// dev and test are copies of train.
    #[default]
    Shared,
    /// Seeded 80/10/10 partition.
    Disjoint,
}

fn write(path: &Path, text: &str) -> Result<(), DatasetError> {
    fs::write(path, text).map_err(|e| DatasetError::io(path, e))
}

fn lines<'a>(sentences: impl IntoIterator<Item = &'a AbstractSentence>) -> String {
    sentences.into_iter().map(|s| format!("{s}\n")).collect()
}

pub fn uncovered_report(entries: &[UncoveredEntry]) -> String {
    entries
        .iter()
        .map(|e| format!("{}:{}\t{}\n", e.path.display(), e.line, e.sentence))
        .collect()
}

pub fn emit_dataset(
    generated: &Generated,
    out_dir: &Path,
    split: Split,
    seed: u64,
) -> Result<(), DatasetError> {
    fs::create_dir_all(out_dir).map_err(|e| DatasetError::io(out_dir, e))?;
    let ds = &generated.dataset;
    let n = ds.len();
    let parts: [(&str, Vec<usize>); 3] = match split {
        Split::Shared => ["train", "dev", "test"].map(|name| (name, (0..n).collect())),
        Split::Disjoint => {
            let mut order: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(
                order.as_mut_slice(),
                &mut ChaCha8Rng::seed_from_u64(seed),
            );
            let n_train = n * 8 / 10;
            let n_dev = n / 10;
            let take = |range: std::ops::Range<usize>| {
                let mut v = order[range].to_vec();
                v.sort_unstable();
                v
            };
            [
                ("train", take(0..n_train)),
                ("dev", take(n_train..n_train + n_dev)),
                ("test", take(n_train + n_dev..n)),
            ]
        }
    };
    for (name, idx) in &parts {
        write(
            &out_dir.join(format!("{name}.cuda")),
            &lines(idx.iter().map(|&i| &ds.source[i])),
        )?;
        write(
            &out_dir.join(format!("{name}.opencl")),
            &lines(idx.iter().map(|&i| &ds.target[i])),
        )?;
    }
    let vocab_text = |v: BTreeSet<String>| v.into_iter().map(|s| s + "\n").collect::<String>();
    write(&out_dir.join("vocab.cuda"), &vocab_text(ds.vocab_source()))?;
    write(
        &out_dir.join("vocab.opencl"),
        &vocab_text(ds.vocab_target()),
    )?;
    if let Some(stats) = &generated.stats {
        write(&out_dir.join("stats.tsv"), &stats.to_tsv())?;
    }
    write(
        &out_dir.join("uncovered.txt"),
        &uncovered_report(&generated.uncovered),
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::SymbolClass;
    use crate::usage_tree::{build_usage_tree, parse_usage_pairs};

    const CUDA: &str = "cudaMemcpy(_expr0, _expr1, _expr2, cudaMemcpyHostToDevice);\ncudaFree(_expr0);\ncudaDeviceSynchronize();\n";
    const OPENCL: &str = "clEnqueueWriteBuffer(command_queue, _expr0, CL_TRUE, 0, _expr2, _expr1, 0, NULL, NULL);\nclReleaseMemObject(_expr0);\nclFinish(command_queue);\n";

    fn tree() -> UsageTree {
        build_usage_tree(parse_usage_pairs(CUDA, OPENCL, &Lexicon::default()).unwrap()).unwrap()
    }

    fn named(text: &str) -> CapturedExpr {
        vec![ExprToken::Named(SymbolClass::Id, text.into())]
    }

    #[test]
    fn two_by_two_by_two_gives_eight() {
        let t = tree();
        let mut store = ExprStore::default();
        for (k, names) in [["a", "b"], ["x", "y"], ["n", "m"]].iter().enumerate() {
            for name in names {
                store.insert(0, k, named(name)).unwrap();
            }
        }
        let raw = PermuteOptions {
            dedup: false,
            ..Default::default()
        };
        assert_eq!(permute_expressions(&t, &store, &raw).len(), 8);
        // every capture is a single fresh identifier, so all eight rename alike
        let d = permute_expressions(&t, &store, &PermuteOptions::default());
        assert_eq!(d.len(), 1);
        assert_eq!(
            d.source[0].to_string(),
            "cudaMemcpy ( _id0 , _id1 , _id2 , cudaMemcpyHostToDevice ) ;"
        );
        assert_eq!(
            d.target[0].to_string(),
            "clEnqueueWriteBuffer ( command_queue , _id0 , CL_TRUE , 0 , _id2 , _id1 , 0 , NULL , NULL ) ;"
        );
    }

    #[test]
    fn shared_names_across_captures_renumber() {
        let t = tree();
        let mut store = ExprStore::default();
        store.insert(0, 0, named("a")).unwrap();
        store.insert(0, 1, named("a")).unwrap();
        store.insert(0, 1, named("b")).unwrap();
        store.insert(0, 2, named("n")).unwrap();
        let d = permute_expressions(&t, &store, &PermuteOptions::default());
        let src: Vec<_> = d.source.iter().map(ToString::to_string).collect();
        assert_eq!(
            src,
            [
                "cudaMemcpy ( _id0 , _id0 , _id1 , cudaMemcpyHostToDevice ) ;",
                "cudaMemcpy ( _id0 , _id1 , _id2 , cudaMemcpyHostToDevice ) ;",
            ]
        );
    }

    #[test]
    fn empty_node_emits_nothing() {
        let t = tree();
        let mut store = ExprStore::default();
        store.insert(0, 0, named("a")).unwrap();
        store.insert(0, 1, named("b")).unwrap();
        assert!(permute_expressions(&t, &store, &PermuteOptions::default()).is_empty());
    }

    #[test]
    fn cap_samples_deterministically() {
        let t = tree();
        let mut store = ExprStore::default();
        for k in 0..3 {
            for i in 0..10 {
                let cap = vec![
                    ExprToken::Named(SymbolClass::Id, format!("v{i}")),
                    ExprToken::Named(SymbolClass::Op, "+".into()),
                    ExprToken::Verbatim(i.to_string()),
                ];
                store.insert(0, k, cap).unwrap();
            }
        }
        let opts = PermuteOptions {
            cap: Some(50),
            dedup: false,
            seed: 7,
            permute: true,
        };
        let a = permute_expressions(&t, &store, &opts);
        assert_eq!(a.len(), 50);
        assert_eq!(a, permute_expressions(&t, &store, &opts));
        let other = PermuteOptions { seed: 8, ..opts };
        assert_ne!(a, permute_expressions(&t, &store, &other));
    }

    #[test]
    fn harvest_and_no_permute() {
        let t = tree();
        let src = "void f() {\n\
            cudaMemcpy(A_gpu, A, sizeof(double)*NI, cudaMemcpyHostToDevice);\n\
            cudaMemcpy(B_gpu, B, sizeof(double)*NI*NL, cudaMemcpyHostToDevice);\n\
            cudaFree(A_gpu);\ncudaFree(B_gpu);\n\
            cudaDeviceSynchronize();\n\
            cudaThreadSynchronize();\n}\n";
        let h = harvest_source(Path::new("f.cu"), src, &t, &Lexicon::default());
        assert_eq!(h.occurrences, 5);
        assert_eq!(h.found(), 4);
        assert_eq!(h.uncovered.len(), 1);
        assert_eq!(h.uncovered[0].line, 7);
        let flat = PermuteOptions {
            permute: false,
            ..Default::default()
        };
        assert_eq!(permute_expressions(&t, &h.store, &flat).len(), 4);
        // 2 x 2 x 2 products of which the sizeof shapes differ
        let full = permute_expressions(&t, &h.store, &PermuteOptions::default());
        assert_eq!(full.len(), 2 + 1 + 1);
        assert!(full.vocab_source().contains(UNTRANSLATED));
    }

    #[test]
    fn stats_round_trip_and_table() {
        let stats = DatasetStats {
            rows: vec![StatsRow {
                name: "polybench".into(),
                applications: 3,
                found: 10,
                generated: 25,
            }],
            total: StatsRow {
                name: "Total".into(),
                applications: 3,
                found: 10,
                generated: 25,
            },
        };
        let tsv = stats.to_tsv();
        assert!(
            tsv.starts_with("Benchmark\t# application\t# sentences found\t# sentences generated\n")
        );
        assert_eq!(
            DatasetStats::parse_tsv(Path::new("s.tsv"), &tsv).unwrap(),
            stats
        );
        assert!(stats
            .to_table()
            .lines()
            .next()
            .unwrap()
            .starts_with("Benchmark"));
        assert!(DatasetStats::parse_tsv(Path::new("s.tsv"), "Benchmark\tx\n").is_err());
    }

    #[test]
    fn decode_is_odometer_order() {
        assert_eq!(decode(0, &[2, 3]), [0, 0]);
        assert_eq!(decode(1, &[2, 3]), [0, 1]);
        assert_eq!(decode(3, &[2, 3]), [1, 0]);
    }
}
