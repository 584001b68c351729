use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Parser, Subcommand, ValueEnum};

use cutrans::dataset::{self, DatasetError, DatasetStats, PermuteOptions, Split};
use cutrans::mapfile::{write_mapping_table, write_passthrough};
use cutrans::pipeline::{self, load_lexicon, load_usage_tree};
use cutrans::translate::{ExternalCommand, TranslateError};
use cutrans::{preprocess_unit, Backend, Context, Error, Lexicon, UsageTree};

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_BACKEND: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "cutrans",
    version,
    about = "Sentence-level CUDA to OpenCL translation"
)]
struct Cli {
    /// Lexicon file replacing the built-in one
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// How kernel code is located
    #[arg(long, global = true, value_enum, default_value_t = ContextArg::Auto)]
    context: ContextArg,
    /// Worker threads for corpus harvesting
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ContextArg {
    Host,
    Kernel,
    Auto,
}

impl From<ContextArg> for Context {
    fn from(c: ContextArg) -> Self {
        match c {
            ContextArg::Host => Context::Host,
            ContextArg::Kernel => Context::Kernel,
            ContextArg::Auto => Context::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitArg {
    Shared,
    Disjoint,
}

#[derive(Subcommand)]
enum Command {
    /// Write renamed sentences, mapping tables and passthrough lines
    Preprocess {
        #[arg(required = true)]
        sources: Vec<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Build a parallel dataset from usage pairs and a CUDA corpus
    GenDataset {
        #[arg(long, num_args = 2, value_names = ["CUDA", "OPENCL"], required = true)]
        usages: Vec<PathBuf>,
        /// Benchmark directories (one stats row each) or single files
        #[arg(long, num_args = 1..)]
        corpus: Vec<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
        /// Most pairs emitted per usage
        #[arg(long, default_value_t = dataset::DEFAULT_CAP)]
        cap: usize,
        /// Emit complete products regardless of size
        #[arg(long, conflicts_with = "cap")]
        no_cap: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SplitArg::Shared)]
        split: SplitArg,
        /// Keep duplicate pairs
        #[arg(long)]
        no_dedup: bool,
        /// Emit each matched sentence once instead of expression products
        #[arg(long)]
        no_permute: bool,
    },
    /// Translate CUDA sources into OpenCL host and kernel files
    Translate {
        #[arg(required = true)]
        sources: Vec<PathBuf>,
        #[arg(long, num_args = 2, value_names = ["CUDA", "OPENCL"])]
        usages: Vec<PathBuf>,
        /// rule, identity, or extern:<command>
        #[arg(long, default_value = "rule")]
        backend: String,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Print the stats table of a dataset directory
    Stats { dir: PathBuf },
}

/// An error with the exit status it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let error = e.into();
        Failure {
            code: exit_code(&error),
            error,
        }
    }
}

fn exit_code(error: &anyhow::Error) -> u8 {
    for cause in error.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Io { .. } => EXIT_IO,
                Error::Translate(t) if t.is_backend_error() => EXIT_BACKEND,
                Error::Restore(_) => EXIT_BACKEND,
                Error::Dataset(d) => dataset_code(d),
                _ => EXIT_PARSE,
            };
        }
        if let Some(d) = cause.downcast_ref::<DatasetError>() {
            return dataset_code(d);
        }
        if let Some(t) = cause.downcast_ref::<TranslateError>() {
            return if t.is_backend_error() {
                EXIT_BACKEND
            } else {
                EXIT_PARSE
            };
        }
        if cause.downcast_ref::<io::Error>().is_some() {
            return EXIT_IO;
        }
    }
    EXIT_USAGE
}

fn dataset_code(e: &DatasetError) -> u8 {
    match e {
        DatasetError::Io { .. } => EXIT_IO,
        _ => EXIT_PARSE,
    }
}

fn usage_error(msg: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        error: anyhow::anyhow!("{msg}"),
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into())
}

fn create_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    Ok(())
}

fn preprocess(
    sources: &[PathBuf],
    out: &Path,
    lexicon: &Lexicon,
    context: Context,
) -> Result<u8, Failure> {
    create_dir(out)?;
    for src in sources {
        let text = pipeline::read(src)?;
        let unit = preprocess_unit(&text, lexicon, context).map_err(|e| Error::Lex {
            path: src.clone(),
            source: e,
        })?;
        let name = stem(src);
        let sentences: String = unit.sentences.iter().map(|s| format!("{s}\n")).collect();
        pipeline::write(&out.join(format!("{name}.sentences")), &sentences)?;
        pipeline::write(
            &out.join(format!("{name}.map")),
            &write_mapping_table(&unit),
        )?;
        pipeline::write(
            &out.join(format!("{name}.passthrough")),
            &write_passthrough(&unit.passthrough),
        )?;
    }
    Ok(0)
}

fn parse_backend(spec: &str) -> Result<Backend, Failure> {
    match spec {
        "rule" => Ok(Backend::Rule),
        "identity" => Ok(Backend::Identity),
        other => other
            .strip_prefix("extern:")
            .and_then(ExternalCommand::parse)
            .map(Backend::External)
            .ok_or_else(|| {
                usage_error(format!(
                    "unknown backend `{other}`; use rule, identity or extern:<command>"
                ))
            }),
    }
}

fn translate(
    sources: &[PathBuf],
    usages: &[PathBuf],
    backend: &str,
    out: &Path,
    lexicon: &Lexicon,
    context: Context,
) -> Result<u8, Failure> {
    let backend = parse_backend(backend)?;
    let tree = match usages {
        [cuda, opencl] => load_usage_tree(cuda, opencl, lexicon)?,
        [] if backend != Backend::Rule => UsageTree::default(),
        _ => {
            return Err(usage_error(
                "the rule backend needs --usages <CUDA> <OPENCL>",
            ))
        }
    };
    create_dir(out)?;
    let mut status = 0;
    for src in sources {
        let text = pipeline::read(src)?;
        let t = pipeline::translate_source(src, &text, &backend, &tree, lexicon, context)?;
        for w in &t.unit.warnings {
            eprintln!("{}:{}: warning: {}", src.display(), w.line, w.message);
        }
        for e in &t.restore_errors {
            eprintln!("{}: error: {e}", src.display());
            status = EXIT_BACKEND;
        }
        let name = stem(src);
        pipeline::write(&out.join(format!("{name}_host.c")), &t.output.host)?;
        if !t.output.kernel.is_empty() {
            pipeline::write(&out.join(format!("{name}_kernel.cl")), &t.output.kernel)?;
        }
    }
    Ok(status)
}

#[allow(clippy::too_many_arguments)]
fn gen_dataset(
    usages: &[PathBuf],
    corpus: &[PathBuf],
    out: &Path,
    opts: PermuteOptions,
    split: Split,
    lexicon: &Lexicon,
) -> Result<u8, Failure> {
    let tree = load_usage_tree(&usages[0], &usages[1], lexicon)?;
    let generated = dataset::generate(corpus, &tree, lexicon, &opts)?;
    dataset::emit_dataset(&generated, out, split, opts.seed)?;
    for f in &generated.failures {
        eprintln!("error: {f}");
    }
    if let Some(stats) = &generated.stats {
        print!("{}", stats.to_table());
    }
    Ok(if generated.failures.is_empty() {
        0
    } else {
        EXIT_PARSE
    })
}

fn stats(dir: &Path) -> Result<u8, Failure> {
    let path = dir.join("stats.tsv");
    let text = pipeline::read(&path)?;
    let stats = DatasetStats::parse_tsv(&path, &text)?;
    print!("{}", stats.to_table());
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    let lexicon = load_lexicon(cli.lexicon.as_deref())?;
    let context = Context::from(cli.context);
    match cli.command {
        Command::Preprocess { sources, out } => preprocess(&sources, &out, &lexicon, context),
        Command::GenDataset {
            usages,
            corpus,
            out,
            cap,
            no_cap,
            seed,
            split,
            no_dedup,
            no_permute,
        } => {
            let opts = PermuteOptions {
                cap: (!no_cap).then_some(cap),
                seed,
                dedup: !no_dedup,
                permute: !no_permute,
            };
            let split = match split {
                SplitArg::Shared => Split::Shared,
                SplitArg::Disjoint => Split::Disjoint,
            };
            gen_dataset(&usages, &corpus, &out, opts, split, &lexicon)
        }
        Command::Translate {
            sources,
            usages,
            backend,
            out,
        } => translate(&sources, &usages, &backend, &out, &lexicon, context),
        Command::Stats { dir } => stats(&dir),
    }
}

/// The error chain, skipping causes whose text the outer message already embeds.
fn render(error: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in error.chain() {
        let text = cause.to_string();
        if !out.contains(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", render(&f.error));
            ExitCode::from(f.code)
        }
    }
}
