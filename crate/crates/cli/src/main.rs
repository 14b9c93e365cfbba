//! `docpredict` command-line tool.

mod manifest;

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use docpredict::cascade::{cascade_rank, utterance_query, CascadeConfig};
use docpredict::corpus::{
    export_triples, filter_dialogs, load_corpus_files, read_dialogs, read_documents, split_corpus, Corpus,
    CorpusSplit, Dialog, DialogRecord, DocumentRecord, DomainAllowlist, SplitAssignment, SplitSizes,
    TruncationStrategy, DEFAULT_NEGATIVES,
};
use docpredict::eval::{run_experiment, write_results, ExperimentRun, MetricsReport, ModelMetrics, QueryResult};
use docpredict::hybrid::{rerank_or_fallback, HybridConfig, ScorerHandle};
use docpredict::index::{attach_anchor_text, build_index, retrieve, FieldWeights, FieldedIndex, RankedList};
use serde::{Deserialize, Serialize};
use serde_json::json;

use manifest::{manifest_path_for, RunManifest};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Io { path: PathBuf, source: std::io::Error },
    Core(docpredict::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Data(_) => "data",
            CliError::Io { .. } => "io",
            CliError::Core(_) => "data",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Data(m) => m.clone(),
            CliError::Io { path, source } => format!("{}: {source}", path.display()),
            CliError::Core(e) => e.to_string(),
        }
    }
}

impl From<docpredict::Error> for CliError {
    fn from(e: docpredict::Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "docpredict", version, about = "Predict the document a support dialog will link to")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load raw dialogs and documents, apply the URL filters, optionally split.
    Ingest(IngestArgs),
    /// Index operations.
    Index {
        #[command(subcommand)]
        command: IndexCommand,
    },
    /// Rank documents for one dialog.
    Rank(RankArgs),
    /// Score a model on a split and print the metrics table.
    Evaluate(EvaluateArgs),
    /// Write (dialog, document, label) training triples.
    ExportTriples(ExportArgs),
}

#[derive(Subcommand)]
enum IndexCommand {
    /// Build a fielded index snapshot, with anchor text from training dialogs.
    Build(IndexBuildArgs),
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long)]
    dialogs: PathBuf,
    #[arg(long)]
    documents: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Allowed URL prefix; repeatable. Defaults to the documents' origins.
    #[arg(long = "allow-prefix")]
    allow_prefix: Vec<String>,
    /// Split sizes as TRAIN,DEV,TEST.
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CorpusArgs {
    /// Ingested dialogs (JSON lines).
    #[arg(long)]
    dialogs: PathBuf,
    /// Ingested documents (JSON lines).
    #[arg(long)]
    documents: PathBuf,
    /// Split assignment written by `ingest`.
    #[arg(long)]
    split: Option<PathBuf>,
}

#[derive(Args)]
struct IndexBuildArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long = "index-path")]
    index_path: PathBuf,
    /// Dialog subset whose text becomes anchor text.
    #[arg(long = "anchor-subset", default_value = "train")]
    anchor_subset: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Model {
    Bm25,
    Irc,
    Hybrid,
}

impl Model {
    fn label(self) -> &'static str {
        match self {
            Model::Bm25 => "BM25",
            Model::Irc => "IRC",
            Model::Hybrid => "IRC+Scorer",
        }
    }
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "irc")]
    model: Model,
    /// JSON run configuration: {"cascade": {...}, "hybrid": {...}}.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Prebuilt index; built in memory from the corpus when absent.
    #[arg(long = "index-path")]
    index_path: Option<PathBuf>,
    /// Scorer command for `--model hybrid`, run through `sh -c`.
    #[arg(long = "scorer-cmd")]
    scorer_cmd: Option<String>,
    #[arg(long = "timeout-ms")]
    timeout_ms: Option<u64>,
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    InputA,
    InputB,
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long = "dialog-id")]
    dialog_id: String,
    #[arg(long, default_value_t = 10)]
    top: usize,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value = "test")]
    subset: String,
    /// Output directory for report and per-query results.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Documents kept per query in results.jsonl.
    #[arg(long, default_value_t = 20)]
    top: usize,
    /// Independent scorer processes for `--model hybrid`.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, default_value = "train")]
    subset: String,
    #[arg(long, default_value_t = DEFAULT_NEGATIVES)]
    negatives: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunConfig {
    cascade: CascadeConfig,
    hybrid: HybridConfig,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Index {
            command: IndexCommand::Build(a),
        } => index_build(a),
        Command::Rank(a) => rank(a),
        Command::Evaluate(a) => evaluate(a),
        Command::ExportTriples(a) => export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.message()}));
            ExitCode::from(if matches!(e, CliError::Usage(_)) { 2 } else { 1 })
        }
    }
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::io(path, e))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn write_jsonl<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> CliResult<()> {
    let mut w = create(path)?;
    for r in rows {
        let line = serde_json::to_string(&r).map_err(docpredict::Error::from)?;
        writeln!(w, "{line}").map_err(|e| CliError::io(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(docpredict::Error::from)?;
    fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

fn load_corpus(args: &CorpusArgs) -> CliResult<(Corpus, Option<CorpusSplit>)> {
    let (dialogs, dialog_errors) = read_dialogs(open(&args.dialogs)?)?;
    let (documents, doc_errors) = read_documents(open(&args.documents)?)?;
    if let Some(e) = dialog_errors.iter().chain(&doc_errors).next() {
        return Err(CliError::Data(format!(
            "{} malformed records, first at {:?} line {}: {}",
            dialog_errors.len() + doc_errors.len(),
            e.kind,
            e.line,
            e.message
        )));
    }
    let corpus = Corpus {
        dialogs,
        documents,
        errors: Vec::new(),
    };
    let split = match &args.split {
        Some(path) => {
            let assignment: SplitAssignment =
                serde_json::from_reader(open(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            Some(CorpusSplit::from_assignment(&corpus, &assignment)?)
        }
        None => None,
    };
    Ok((corpus, split))
}

fn subset<'a>(corpus: &'a Corpus, split: Option<&'a CorpusSplit>, name: &str) -> CliResult<&'a [Dialog]> {
    match split {
        Some(s) => s
            .subset(name)
            .ok_or_else(|| CliError::Usage(format!("unknown subset `{name}` (expected train, dev or test)"))),
        None => Ok(&corpus.dialogs),
    }
}

fn corpus_inputs(args: &CorpusArgs) -> Vec<&Path> {
    let mut v = vec![args.dialogs.as_path(), args.documents.as_path()];
    v.extend(args.split.as_deref());
    v
}

fn ingest(a: IngestArgs) -> CliResult<()> {
    let corpus = load_corpus_files(&a.dialogs, &a.documents)?;
    let allow = if a.allow_prefix.is_empty() {
        DomainAllowlist::from_documents(&corpus.documents)?
    } else {
        DomainAllowlist::new(a.allow_prefix.iter())?
    };
    let record_errors = corpus.errors.clone();
    let (corpus, report) = filter_dialogs(corpus, &allow);
    fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    write_jsonl(&a.out.join("dialogs.jsonl"), corpus.dialogs.iter().map(DialogRecord::from))?;
    write_jsonl(&a.out.join("documents.jsonl"), corpus.documents.iter().map(DocumentRecord::from))?;
    let mut summary = json!({
        "allowlist": allow.prefixes(),
        "filter": report,
        "record_errors": record_errors,
    });
    if let Some(sizes) = &a.sizes {
        let sizes = parse_sizes(sizes)?;
        let split = split_corpus(&corpus, sizes, a.seed)?;
        write_json(&a.out.join("split.json"), &split.assignment(a.seed))?;
        summary["split"] = json!({"train": sizes.train, "dev": sizes.dev, "test": sizes.test});
    }
    write_json(&a.out.join("ingest_report.json"), &summary)?;
    eprintln!(
        "kept {} of {} dialogs, {} documents, {} malformed records",
        report.kept,
        report.input,
        corpus.documents.len(),
        record_errors.len()
    );
    let config = json!({"allow_prefix": a.allow_prefix, "sizes": a.sizes});
    RunManifest::new(config, &[&a.dialogs, &a.documents], Some(a.seed))?.write(&manifest_path_for(&a.out))
}

fn parse_sizes(text: &str) -> CliResult<SplitSizes> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("--sizes `{text}`: {e}")))?;
    match parts[..] {
        [train, dev, test] => Ok(SplitSizes { train, dev, test }),
        _ => Err(CliError::Usage(format!("--sizes expects TRAIN,DEV,TEST, got `{text}`"))),
    }
}

fn build_with_anchors(corpus: &Corpus, split: Option<&CorpusSplit>, anchor_subset: &str) -> CliResult<FieldedIndex> {
    let index = build_index(&corpus.documents)?;
    let anchors = subset(corpus, split, anchor_subset)?;
    Ok(attach_anchor_text(index, anchors)?)
}

fn index_build(a: IndexBuildArgs) -> CliResult<()> {
    let (corpus, split) = load_corpus(&a.corpus)?;
    let index = build_with_anchors(&corpus, split.as_ref(), &a.anchor_subset)?;
    index.save_to_path(&a.index_path)?;
    eprintln!("indexed {} documents, {} terms", index.doc_count(), index.num_terms());
    let config = json!({"anchor_subset": a.anchor_subset, "bm25": index.params()});
    RunManifest::new(config, &corpus_inputs(&a.corpus), None)?.write(&manifest_path_for(&a.index_path))
}

fn load_run_config(m: &ModelArgs) -> CliResult<RunConfig> {
    let mut cfg: RunConfig = match &m.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(t) = m.timeout_ms {
        cfg.hybrid.timeout_ms = t;
    }
    if let Some(s) = m.strategy {
        cfg.hybrid.strategy = match s {
            StrategyArg::InputA => TruncationStrategy::InputA,
            StrategyArg::InputB => TruncationStrategy::InputB,
        };
    }
    cfg.cascade.validate()?;
    cfg.hybrid.validate()?;
    if m.model == Model::Hybrid && m.scorer_cmd.is_none() {
        return Err(CliError::Usage("--model hybrid requires --scorer-cmd".into()));
    }
    Ok(cfg)
}

fn load_index(m: &ModelArgs, corpus: &Corpus, split: Option<&CorpusSplit>) -> CliResult<FieldedIndex> {
    match &m.index_path {
        Some(p) => Ok(FieldedIndex::load_from_path(p)?),
        None => build_with_anchors(corpus, split, "train"),
    }
}

fn first_stage(index: &FieldedIndex, cfg: &RunConfig, model: Model, dialog: &Dialog) -> docpredict::Result<RankedList> {
    match model {
        Model::Bm25 => {
            let q = utterance_query(dialog)?;
            retrieve(index, &FieldWeights::content_only(), &q, cfg.cascade.first_pass_depth)
        }
        Model::Irc | Model::Hybrid => cascade_rank(index, dialog, &cfg.cascade),
    }
}

fn rank(a: RankArgs) -> CliResult<()> {
    if a.top == 0 {
        return Err(CliError::Usage("--top must be at least 1".into()));
    }
    let cfg = load_run_config(&a.model)?;
    let (corpus, split) = load_corpus(&a.corpus)?;
    let index = load_index(&a.model, &corpus, split.as_ref())?;
    let dialog = corpus
        .dialogs
        .iter()
        .find(|d| d.dialog_id == a.dialog_id)
        .ok_or_else(|| docpredict::Error::UnknownDialog(a.dialog_id.clone()))?;
    let mut ranking = first_stage(&index, &cfg, a.model.model, dialog)?;
    if a.model.model == Model::Hybrid {
        let mut scorer = spawn_scorer(&a.model, &cfg)?;
        let docs = corpus.document_map();
        let (r, err) = rerank_or_fallback(&mut scorer, dialog, &ranking, &docs, &cfg.hybrid)?;
        if let Some(e) = err {
            eprintln!("{}", json!({"warning": "scorer failed, using IRC ranking", "message": e.to_string()}));
        }
        ranking = r;
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for (i, e) in ranking.entries.iter().take(a.top).enumerate() {
        writeln!(out, "{} {} {:.6}", i + 1, e.doc_id, e.score).map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
    }
    Ok(())
}

fn spawn_scorer(m: &ModelArgs, cfg: &RunConfig) -> CliResult<ScorerHandle> {
    let cmd = m.scorer_cmd.as_deref().expect("checked in load_run_config");
    Ok(ScorerHandle::spawn(cmd, Duration::from_millis(cfg.hybrid.timeout_ms))?)
}

fn evaluate(a: EvaluateArgs) -> CliResult<()> {
    if a.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let cfg = load_run_config(&a.model)?;
    let (corpus, split) = load_corpus(&a.corpus)?;
    let index = load_index(&a.model, &corpus, split.as_ref())?;
    let dialogs = subset(&corpus, split.as_ref(), &a.subset)?;
    let model = a.model.model;
    let provenance = json!({
        "model": model,
        "subset": a.subset,
        "queries": dialogs.len(),
        "documents": index.doc_count(),
        "bm25": index.params(),
        "config": match model {
            Model::Bm25 => json!({"first_pass_depth": cfg.cascade.first_pass_depth, "field_weights": FieldWeights::content_only()}),
            Model::Irc => json!({"cascade": cfg.cascade}),
            Model::Hybrid => json!({"cascade": cfg.cascade, "hybrid": cfg.hybrid, "scorer_cmd": a.model.scorer_cmd}),
        },
    });
    let run = if model == Model::Hybrid {
        if dialogs.is_empty() {
            return Err(docpredict::Error::Empty("evaluation dialogs").into());
        }
        let results = hybrid_pass(&a, &cfg, &corpus, &index, dialogs)?;
        ExperimentRun {
            report: MetricsReport {
                rows: vec![ModelMetrics::from_results(model.label(), &results)?],
                provenance,
            },
            results,
        }
    } else {
        run_experiment(model.label(), |d| first_stage(&index, &cfg, model, d), dialogs, provenance)?
    };

    let table = run.report.to_table();
    print!("{table}");
    if let Some(out) = &a.out {
        fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
        fs::write(out.join("report.txt"), &table).map_err(|e| CliError::io(out, e))?;
        fs::write(out.join("report.json"), run.report.to_json() + "\n").map_err(|e| CliError::io(out, e))?;
        let path = out.join("results.jsonl");
        let w = create(&path)?;
        write_results(w, &run.results, a.top).map_err(|e| CliError::io(&path, e))?;
        let mut inputs = corpus_inputs(&a.corpus);
        inputs.extend(a.model.index_path.as_deref());
        inputs.extend(a.model.config.as_deref());
        RunManifest::new(run.report.provenance.clone(), &inputs, None)?.write(&manifest_path_for(out))?;
    }
    Ok(())
}

/// Cascade plus re-ranking with `workers` scorer processes over contiguous
/// chunks of the query list; output order is the input order. A scorer
/// failure falls back to the cascade ranking for that query.
fn hybrid_pass(
    a: &EvaluateArgs,
    cfg: &RunConfig,
    corpus: &Corpus,
    index: &FieldedIndex,
    dialogs: &[Dialog],
) -> CliResult<Vec<QueryResult>> {
    let docs = corpus.document_map();
    let chunk = dialogs.len().div_ceil(a.workers);
    let chunks: Vec<CliResult<Vec<QueryResult>>> = std::thread::scope(|s| {
        let handles: Vec<_> = dialogs
            .chunks(chunk)
            .map(|part| {
                let docs = &docs;
                s.spawn(move || -> CliResult<Vec<QueryResult>> {
                    let mut scorer = spawn_scorer(&a.model, cfg)?;
                    let mut out = Vec::with_capacity(part.len());
                    for dialog in part {
                        let ranking = match cascade_rank(index, dialog, &cfg.cascade) {
                            Ok(r) => r,
                            Err(e) => {
                                out.push(QueryResult::failed(&dialog.dialog_id, &dialog.gold_url, e.to_string()));
                                continue;
                            }
                        };
                        let (r, err) = rerank_or_fallback(&mut scorer, dialog, &ranking, docs, &cfg.hybrid)?;
                        let mut q = QueryResult::from_ranking(&dialog.dialog_id, &dialog.gold_url, &r);
                        if let Some(e) = err {
                            q.error = Some(e.to_string());
                            if !scorer.is_healthy() {
                                scorer = spawn_scorer(&a.model, cfg)?;
                            }
                        }
                        out.push(q);
                    }
                    Ok(out)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scorer worker panicked")).collect()
    });
    let mut results = Vec::with_capacity(dialogs.len());
    for c in chunks {
        results.extend(c?);
    }
    Ok(results)
}

fn export(a: ExportArgs) -> CliResult<()> {
    let (corpus, split) = load_corpus(&a.corpus)?;
    let dialogs = subset(&corpus, split.as_ref(), &a.subset)?;
    let triples = export_triples(dialogs, &corpus.documents, a.negatives, a.seed)?;
    let w = create(&a.out)?;
    docpredict::corpus::write_triples(w, &triples).map_err(|e| CliError::io(&a.out, e))?;
    eprintln!("wrote {} triples for {} dialogs", triples.len(), dialogs.len());
    let config = json!({"subset": a.subset, "negatives": a.negatives});
    RunManifest::new(config, &corpus_inputs(&a.corpus), Some(a.seed))?.write(&manifest_path_for(&a.out))
}

