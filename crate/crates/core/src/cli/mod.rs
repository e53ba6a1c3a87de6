// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! The `pseudokit` command line.
//!
//! Exit codes: 0 on success, 1 when some documents failed (they are listed in
//! the manifest), 2 on usage or configuration errors.

mod manifest;

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::{self, Document};
use crate::detect::{self, Detector, ExternalDetector, Gazetteer, MatchPolicy};
use crate::eval::{self, LeakageOptions, LeakageTable, SynthConfig, SyntheticityModel};
use crate::kg::KnowledgeGraph;
use crate::llm::{self, ChatEndpoint, HttpEndpoint, LlmChain, LlmEndpoint, MockEndpoint};
use crate::rewrite::{self, BatchOptions, DocFailure, LinkScope, RewriteMode};

pub use manifest::{write_atomic, InputDigest, Manifest};

#[derive(Parser, Debug)]
#[command(name = "pseudokit", version, about = "Pseudonymize or sanitize named entities in text corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Detect entities and write them as the `entities` field
    Detect(DetectArgs),
    /// Replace entities with PERSON_k / LOCATION_k / ORGANIZATION_k
    Sanitize(RewriteArgs),
    /// Replace entities with knowledge-graph surrogates
    Pseudonymize(RewriteArgs),
    /// Two-stage LLM extraction and replacement
    LlmPseudonymize(LlmArgs),
    /// Write `original<TAB>rewritten` pairs
    GenParallel(ParallelArgs),
    /// Leakage (false negative rate) of rewritten corpora against gold entities
    EvalPrivacy(EvalArgs),
    /// Train the n-gram syntheticity classifier
    SynthTrain(SynthTrainArgs),
    /// Score a trained syntheticity classifier on labeled text
    SynthEval(SynthEvalArgs),
    /// Convert CoNLL-2003 to document JSONL
    ConllImport(ConllArgs),
    /// Serve a gazetteer over the external detector protocol on stdin/stdout
    #[command(hide = true)]
    ServeDetector(ServeArgs),
}

#[derive(Args, Debug, Clone)]
struct Io {
    /// Input file
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Output file
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Manifest path [default: manifest.json next to --out]
    #[arg(long, value_name = "PATH")]
    manifest: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Run {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Documents processed in parallel
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
}

#[derive(Args, Debug)]
struct DetectArgs {
    #[command(flatten)]
    io: Io,
    #[command(flatten)]
    run: Run,
    /// oracle | gazetteer:<lexicon.tsv> | external:<command>
    #[arg(long, default_value = "oracle")]
    detector: DetectorSpec,
}

#[derive(Args, Debug)]
struct RewriteArgs {
    #[command(flatten)]
    io: Io,
    #[command(flatten)]
    run: Run,
    #[arg(long, default_value = "oracle")]
    detector: DetectorSpec,
    /// Knowledge graph JSONL (required for pseudonymize)
    #[arg(long, value_name = "PATH")]
    kg: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Scope::Doc)]
    link_scope: Scope,
}

#[derive(Args, Debug)]
struct LlmArgs {
    #[command(flatten)]
    io: Io,
    #[command(flatten)]
    run: Run,
    /// Base URL of a chat-completions API
    #[arg(long, value_name = "URL", conflicts_with = "mock")]
    endpoint: Option<String>,
    /// YAML mock fixture used instead of a network endpoint
    #[arg(long, value_name = "PATH")]
    mock: Option<PathBuf>,
    #[arg(long, default_value = llm::DEFAULT_EXTRACT_MODEL)]
    model_extract: String,
    #[arg(long, default_value = llm::DEFAULT_REPLACE_MODEL)]
    model_replace: String,
    /// Environment variable holding the API key
    #[arg(long, default_value = "LLM_API_KEY")]
    api_key_env: String,
    #[arg(long, default_value_t = 0.0)]
    temperature: f64,
    #[arg(long, default_value_t = 60)]
    timeout_secs: u64,
    /// Transport retries per request
    #[arg(long, default_value_t = 3)]
    max_retries: u32,
    /// Extra replacement attempts when the entity lists do not align
    #[arg(long, default_value_t = 2)]
    alignment_retries: u32,
    #[arg(long, default_value_t = 4)]
    max_in_flight: usize,
}

#[derive(Args, Debug)]
struct ParallelArgs {
    #[command(flatten)]
    io: Io,
    #[command(flatten)]
    run: Run,
    #[arg(long, default_value = "oracle")]
    detector: DetectorSpec,
    #[arg(long, value_name = "PATH")]
    kg: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Pseudonymize)]
    mode: Mode,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Gold documents with `entities`
    #[arg(long, value_name = "PATH")]
    gold: PathBuf,
    /// Rewritten corpus; repeat for several systems
    #[arg(long = "in", value_name = "PATH", required = true)]
    input: Vec<PathBuf>,
    /// Row names, one per --in [default: file stem]
    #[arg(long)]
    system: Vec<String>,
    /// Report JSON
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Count case-insensitive matches as leaks too
    #[arg(long)]
    fold_case: bool,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
}

#[derive(Args, Debug)]
struct SynthTrainArgs {
    /// Labeled JSONL (`text`, `label`, optional `pair`)
    #[arg(long = "in", value_name = "PATH", required_unless_present = "pairs", conflicts_with = "pairs")]
    input: Option<PathBuf>,
    /// Parallel TSV from gen-parallel, used instead of --in
    #[arg(long, value_name = "PATH")]
    pairs: Option<PathBuf>,
    /// Model JSON
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fraction of pairs used for training; the rest is held out
    #[arg(long, default_value_t = 0.9)]
    split: f64,
    /// Write the held-out samples here
    #[arg(long, value_name = "PATH")]
    heldout: Option<PathBuf>,
    #[arg(long, default_value_t = 18)]
    hash_bits: u32,
    #[arg(long, default_value_t = 0.1)]
    learning_rate: f64,
    #[arg(long, default_value_t = 20)]
    epochs: usize,
    #[arg(long, default_value_t = 1)]
    batch_size: usize,
    /// Threads for feature extraction
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
}

#[derive(Args, Debug)]
struct SynthEvalArgs {
    #[arg(long, value_name = "PATH")]
    model: PathBuf,
    #[command(flatten)]
    io: Io,
}

#[derive(Args, Debug)]
struct ConllArgs {
    #[command(flatten)]
    io: Io,
}

#[derive(Args, Debug)]
struct ServeArgs {
    /// `surface<TAB>CATEGORY` lexicon
    #[arg(long, value_name = "PATH")]
    lexicon: PathBuf,
    #[arg(long)]
    case_insensitive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Scope {
    Doc,
    Corpus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Sanitize,
    Pseudonymize,
}

/// Parsed `--detector` value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DetectorSpec {
    Oracle,
    Gazetteer(PathBuf),
    External(String),
}

impl std::str::FromStr for DetectorSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "oracle" => Ok(Self::Oracle),
            Some(("gazetteer", path)) if !path.is_empty() => Ok(Self::Gazetteer(path.into())),
            Some(("external", cmd)) if !cmd.trim().is_empty() => Ok(Self::External(cmd.to_string())),
            _ => Err(format!("expected oracle, gazetteer:<lexicon> or external:<command>, got {s:?}")),
        }
    }
}

impl fmt::Display for DetectorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Oracle => f.write_str("oracle"),
            Self::Gazetteer(p) => write!(f, "gazetteer:{}", p.display()),
            Self::External(c) => write!(f, "external:{c}"),
        }
    }
}

/// Anything that stops a run before or instead of producing output.
#[derive(Debug)]
struct ConfigError(String);

impl<E: fmt::Display> From<E> for ConfigError {
    fn from(err: E) -> Self {
        ConfigError(err.to_string())
    }
}

fn config_err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

fn open(path: &Path) -> Result<BufReader<File>, ConfigError> {
    File::open(path).map(BufReader::new).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))
}

fn read_docs(path: &Path) -> Result<Vec<Document>, ConfigError> {
    corpus::read_jsonl(open(path)?).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
}

fn load_kg(path: Option<&Path>, required: bool) -> Result<Option<KnowledgeGraph>, ConfigError> {
    match path {
        Some(p) => Ok(Some(KnowledgeGraph::load(open(p)?).map_err(|e| ConfigError(format!("{}: {e}", p.display())))?)),
        None if required => config_err("--kg is required for pseudonymization"),
        None => Ok(None),
    }
}

fn build_detector(spec: &DetectorSpec, workers: usize) -> Result<Detector, ConfigError> {
    Ok(match spec {
        DetectorSpec::Oracle => Detector::Oracle,
        DetectorSpec::Gazetteer(path) => Detector::Gazetteer(
            Gazetteer::from_tsv(open(path)?, MatchPolicy::default())
                .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?,
        ),
        DetectorSpec::External(cmd) => Detector::External(ExternalDetector::spawn(cmd, workers)?),
    })
}

fn jsonl_bytes(docs: &[Document]) -> Result<Vec<u8>, ConfigError> {
    let mut buf = Vec::new();
    corpus::write_jsonl(docs, &mut buf)?;
    Ok(buf)
}

fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.file_name().map(OsString::from).unwrap_or_default();
    name.push(suffix);
    out.with_file_name(name)
}

/// What a subcommand hands back for the manifest and exit code.
struct Outcome {
    manifest: Manifest,
    manifest_path: PathBuf,
    summary: String,
}

impl Outcome {
    fn new(manifest: Manifest, explicit: Option<&PathBuf>, out: &Path, summary: String) -> Self {
        let manifest_path = explicit.cloned().unwrap_or_else(|| out.with_file_name("manifest.json"));
        Self { manifest, manifest_path, summary }
    }
}

/// Run the command line; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let result = match cli.command {
        Command::ServeDetector(a) => return serve(a),
        Command::Detect(a) => cmd_detect(a, argv),
        Command::Sanitize(a) => cmd_rewrite(a, RewriteMode::Sanitize, argv),
        Command::Pseudonymize(a) => cmd_rewrite(a, RewriteMode::Pseudonymize, argv),
        Command::LlmPseudonymize(a) => cmd_llm(a, argv),
        Command::GenParallel(a) => cmd_parallel(a, argv),
        Command::EvalPrivacy(a) => cmd_eval(a, argv),
        Command::SynthTrain(a) => cmd_synth_train(a, argv),
        Command::SynthEval(a) => cmd_synth_eval(a, argv),
        Command::ConllImport(a) => cmd_conll(a, argv),
    };
    let outcome = match result {
        Ok(outcome) => outcome,
        Err(ConfigError(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("Run with --help for usage.");
            return 2;
        }
    };
    if let Err(e) = outcome.manifest.write(&outcome.manifest_path) {
        eprintln!("error: cannot write manifest {}: {e}", outcome.manifest_path.display());
        return 2;
    }
    eprintln!("{}", outcome.summary);
    if outcome.manifest.failures.is_empty() {
        0
    } else {
        for failure in &outcome.manifest.failures {
            eprintln!("failed {}: {}", failure.id, failure.error);
        }
        1
    }
}

fn serve(args: ServeArgs) -> i32 {
    let policy = MatchPolicy { case_sensitive: !args.case_insensitive, ..MatchPolicy::default() };
    let gazetteer = match File::open(&args.lexicon).map_err(|e| e.to_string()).and_then(|f| {
        Gazetteer::from_tsv(BufReader::new(f), policy).map_err(|e| e.to_string())
    }) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {}: {e}", args.lexicon.display());
            return 2;
        }
    };
    let stdin = io::stdin();
    let stdout = io::stdout();
    match detect::serve_gazetteer(&gazetteer, stdin.lock(), stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn cmd_detect(args: DetectArgs, argv: Vec<String>) -> Result<Outcome, ConfigError> {
    let docs = read_docs(&args.io.input)?;
    let workers = args.run.workers as usize;
    let detector = build_detector(&args.detector, workers)?;
    let results = crate::par::map_ordered(&docs, workers, |doc| detector.detect(doc));
    let mut out = Vec::new();
    let mut failures = Vec::new();
    for (doc, result) in docs.iter().zip(results) {
        match result {
            Ok(spans) => out.push(Document::new(doc.id.clone(), doc.text.clone()).with_gold(spans)),
            Err(e) => failures.push(DocFailure::new(&doc.id, e)),
        }
    }
    write_atomic(&args.io.out, &jsonl_bytes(&out)?)?;
    let mut manifest = Manifest::new("detect", argv, args.run.seed, workers);
    manifest.set("detector", args.detector.to_string());
    manifest.add_input(&args.io.input)?;
    manifest.outputs.push(args.io.out.clone());
    manifest.documents(docs.len(), failures);
    let summary = format!("detect: {} documents, {} failed", docs.len(), manifest.failures.len());
    Ok(Outcome::new(manifest, args.io.manifest.as_ref(), &args.io.out, summary))
}

fn cmd_rewrite(args: RewriteArgs, mode: RewriteMode, argv: Vec<String>) -> Result<Outcome, ConfigError> {
    let kg = load_kg(args.kg.as_deref(), mode == RewriteMode::Pseudonymize)?;
    let docs = read_docs(&args.io.input)?;
    let workers = args.run.workers as usize;
    let detector = build_detector(&args.detector, workers)?;
    let scope = match args.link_scope {
        Scope::Doc => LinkScope::Doc,
        Scope::Corpus => LinkScope::Corpus,
    };
    let options = BatchOptions { seed: args.run.seed, scope, workers };
    let (results, links) = rewrite::rewrite_corpus(&docs, &detector, mode, kg.as_ref(), options);
    let mut out = Vec::new();
    let mut failures = Vec::new();
    for result in results {
        match result {
            Ok(r) => out.push(r.to_document()),
            Err(f) => failures.push(f),
        }
    }
    write_atomic(&args.io.out, &jsonl_bytes(&out)?)?;
    let name = match mode {
        RewriteMode::Sanitize => "sanitize",
        RewriteMode::Pseudonymize => "pseudonymize",
    };
    let mut manifest = Manifest::new(name, argv, args.run.seed, workers);
    manifest.set("detector", args.detector.to_string());
    manifest.set("link_scope", format!("{:?}", args.link_scope).to_lowercase());
    manifest.add_input(&args.io.input)?;
    if let Some(kg) = &args.kg {
        manifest.set("kg", kg.display().to_string());
        manifest.add_input(kg)?;
    }
    if let DetectorSpec::Gazetteer(lexicon) = &args.detector {
        manifest.add_input(lexicon)?;
    }
    manifest.outputs.push(args.io.out.clone());
    if let Some(links) = links {
        let path = sidecar(&args.io.out, ".links.json");
        let mut bytes = serde_json::to_vec_pretty(&links.entries())?;
        bytes.push(b'\n');
        write_atomic(&path, &bytes)?;
        manifest.outputs.push(path);
    }
    manifest.documents(docs.len(), failures);
    let summary = format!("{name}: {} documents, {} failed", docs.len(), manifest.failures.len());
    Ok(Outcome::new(manifest, args.io.manifest.as_ref(), &args.io.out, summary))
}

#[derive(serde::Serialize)]
struct LlmRecord<'a> {
    id: &'a str,
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    replacements: &'a [llm::LlmReplacement],
    diagnostics: &'a llm::LlmDiagnostics,
}

fn cmd_llm(args: LlmArgs, argv: Vec<String>) -> Result<Outcome, ConfigError> {
    let docs = read_docs(&args.io.input)?;
    let workers = args.run.workers as usize;
    let (extractor, replacer, backend): (Arc<dyn ChatEndpoint>, Arc<dyn ChatEndpoint>, String) =
        match (&args.mock, &args.endpoint) {
            (Some(path), _) => {
                let mock: Arc<dyn ChatEndpoint> = Arc::new(MockEndpoint::from_path(path)?);
                (mock.clone(), mock, format!("mock:{}", path.display()))
            }
            (None, Some(url)) => {
                let endpoint = |model: &str| -> Result<Arc<dyn ChatEndpoint>, ConfigError> {
                    let mut config = LlmEndpoint::new(url.clone(), model);
                    config.api_key_env = args.api_key_env.clone();
                    config.timeout = Duration::from_secs(args.timeout_secs);
                    config.max_retries = args.max_retries;
                    config.max_in_flight = args.max_in_flight;
                    config.validate().map_err(ConfigError)?;
                    Ok(Arc::new(HttpEndpoint::new(config)))
                };
                (endpoint(&args.model_extract)?, endpoint(&args.model_replace)?, url.clone())
            }
            (None, None) => return config_err("one of --endpoint or --mock is required"),
        };
    if !args.temperature.is_finite() || args.temperature < 0.0 {
        return config_err("--temperature must be a non-negative number");
    }
    let chain = LlmChain {
        extractor,
        extract_model: args.model_extract.clone(),
        replacer,
        replace_model: args.model_replace.clone(),
        temperature: args.temperature,
        alignment_retries: args.alignment_retries,
    };
    let results = llm::llm_pseudonymize_corpus(&docs, &chain, workers);

    let mut out = Vec::new();
    let mut diag = Vec::new();
    let mut failures = Vec::new();
    for result in &results {
        let record = match result {
            Ok(r) => {
                out.push(r.to_document());
                LlmRecord { id: &r.id, ok: true, error: None, replacements: &r.replacements, diagnostics: &r.diagnostics }
            }
            Err(f) => {
                failures.push(DocFailure::new(&f.id, &f.error));
                LlmRecord { id: &f.id, ok: false, error: Some(f.error.to_string()), replacements: &[], diagnostics: &f.diagnostics }
            }
        };
        serde_json::to_writer(&mut diag, &record)?;
        diag.push(b'\n');
    }
    write_atomic(&args.io.out, &jsonl_bytes(&out)?)?;
    let diag_path = sidecar(&args.io.out, ".diagnostics.jsonl");
    write_atomic(&diag_path, &diag)?;

    let mut manifest = Manifest::new("llm-pseudonymize", argv, args.run.seed, workers);
    manifest.set("backend", backend);
    manifest.set("model_extract", args.model_extract);
    manifest.set("model_replace", args.model_replace);
    manifest.set("temperature", args.temperature.to_string());
    manifest.set("alignment_retries", args.alignment_retries.to_string());
    manifest.add_input(&args.io.input)?;
    if let Some(mock) = &args.mock {
        manifest.add_input(mock)?;
    }
    manifest.outputs.extend([args.io.out.clone(), diag_path]);
    manifest.documents(docs.len(), failures);
    let summary = format!("llm-pseudonymize: {} documents, {} failed", docs.len(), manifest.failures.len());
    Ok(Outcome::new(manifest, args.io.manifest.as_ref(), &args.io.out, summary))
}

fn cmd_parallel(args: ParallelArgs, argv: Vec<String>) -> Result<Outcome, ConfigError> {
    let mode = match args.mode {
        Mode::Sanitize => RewriteMode::Sanitize,
        Mode::Pseudonymize => RewriteMode::Pseudonymize,
    };
    let kg = load_kg(args.kg.as_deref(), mode == RewriteMode::Pseudonymize)?;
    let docs = read_docs(&args.io.input)?;
    let workers = args.run.workers as usize;
    let detector = build_detector(&args.detector, workers)?;
    let (pairs, failures) = match (mode, &kg) {
        (RewriteMode::Pseudonymize, Some(kg)) => {
            match rewrite::generate_parallel_corpus(&docs, &detector, kg, args.run.seed, workers) {
                Ok(c) => (c.pairs, c.failures),
                Err(all) => (Vec::new(), all.0),
            }
        }
        _ => {
            let options = BatchOptions { seed: args.run.seed, workers, ..BatchOptions::default() };
            let (results, _) = rewrite::rewrite_corpus(&docs, &detector, mode, kg.as_ref(), options);
            let mut pairs = Vec::new();
            let mut failures = Vec::new();
            for (doc, r) in docs.iter().zip(results) {
                match r {
                    Ok(r) => pairs.push((doc.text.clone(), r.text)),
                    Err(f) => failures.push(f),
                }
            }
            (pairs, failures)
        }
    };
    let mut buf = Vec::new();
    rewrite::write_parallel_tsv(&pairs, &mut buf)?;
    write_atomic(&args.io.out, &buf)?;
    let mut manifest = Manifest::new("gen-parallel", argv, args.run.seed, workers);
    manifest.set("detector", args.detector.to_string());
    manifest.set("mode", format!("{:?}", args.mode).to_lowercase());
    manifest.add_input(&args.io.input)?;
    if let Some(kg) = &args.kg {
        manifest.add_input(kg)?;
    }
    manifest.outputs.push(args.io.out.clone());
    manifest.documents(docs.len(), failures);
    let summary = format!("gen-parallel: {} pairs, {} failed", pairs.len(), manifest.failures.len());
    Ok(Outcome::new(manifest, args.io.manifest.as_ref(), &args.io.out, summary))
}

fn cmd_eval(args: EvalArgs, argv: Vec<String>) -> Result<Outcome, ConfigError> {
    if !args.system.is_empty() && args.system.len() != args.input.len() {
        return config_err(format!("{} --system names for {} --in files", args.system.len(), args.input.len()));
    }
    let gold = read_docs(&args.gold)?;
    let workers = args.workers as usize;
    let options = LeakageOptions { fold_case: args.fold_case, workers };
    let mut rows = Vec::new();
    for (i, path) in args.input.iter().enumerate() {
        let system = args.system.get(i).cloned().unwrap_or_else(|| {
            path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| format!("system-{i}"))
        });
        let rewritten = read_docs(path)?;
        let report = eval::leakage_report(&system, &gold, &rewritten, options)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        rows.push(report);
    }
    let table = LeakageTable { rows };
    let mut bytes = serde_json::to_vec_pretty(&table)?;
    bytes.push(b'\n');
    write_atomic(&args.out, &bytes)?;
    let mut manifest = Manifest::new("eval-privacy", argv, 0, workers);
    manifest.set("fold_case", args.fold_case.to_string());
    manifest.add_input(&args.gold)?;
    for path in &args.input {
        manifest.add_input(path)?;
    }
    manifest.outputs.push(args.out.clone());
    let summary = table
        .rows
        .iter()
        .map(|r| format!("{}: micro {:.2}% macro {:.2}% ({} of {} leaked)", r.system, r.micro_mean, r.macro_mean, r.leaked(), r.total()))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Outcome::new(manifest, args.manifest.as_ref(), &args.out, summary))
}

fn read_pairs(path: &Path) -> Result<Vec<(String, String)>, ConfigError> {
    let mut pairs = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let (a, b) = line
            .split_once('\t')
            .filter(|(_, b)| !b.contains('\t'))
            .ok_or_else(|| ConfigError(format!("{}:{}: expected two tab-separated fields", path.display(), i + 1)))?;
        pairs.push((rewrite::unescape_tsv_field(a), rewrite::unescape_tsv_field(b)));
    }
    Ok(pairs)
}

fn cmd_synth_train(args: SynthTrainArgs, argv: Vec<String>) -> Result<Outcome, ConfigError> {
    if !(args.split > 0.0 && args.split <= 1.0) {
        return config_err("--split must be in (0, 1]");
    }
    let config = SynthConfig {
        hash_bits: args.hash_bits,
        learning_rate: args.learning_rate,
        epochs: args.epochs,
        batch_size: args.batch_size,
        workers: args.workers as usize,
        ..SynthConfig::default()
    };
    config.validate()?;
    let (source, samples) = match (&args.input, &args.pairs) {
        (Some(path), _) => {
            (path, eval::read_labeled(open(path)?).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?)
        }
        (None, Some(path)) => (path, eval::labeled_pairs(&read_pairs(path)?)),
        (None, None) => return config_err("one of --in or --pairs is required"),
    };
    let (train_idx, test_idx) = eval::split_groups(&samples, 1.0 - args.split, args.seed);
    let train: Vec<_> = train_idx.iter().map(|&i| samples[i].clone()).collect();
    let test: Vec<_> = test_idx.iter().map(|&i| samples[i].clone()).collect();
    let model = eval::train_syntheticity(&train, &config, args.seed)?;
    let mut bytes = Vec::new();
    model.save(&mut bytes)?;
    write_atomic(&args.out, &bytes)?;

    let mut manifest = Manifest::new("synth-train", argv, args.seed, config.workers);
    manifest.set("split", args.split.to_string());
    manifest.set("train_samples", train.len().to_string());
    manifest.set("heldout_samples", test.len().to_string());
    if let Some(loss) = model.final_loss() {
        manifest.set("final_loss", loss.to_string());
    }
    manifest.add_input(source)?;
    manifest.outputs.push(args.out.clone());
    let mut summary = format!("synth-train: {} training samples, final loss {:.4}", train.len(), model.final_loss().unwrap_or(0.0));
    if let Some(path) = &args.heldout {
        let mut buf = Vec::new();
        eval::write_labeled(&test, &mut buf)?;
        write_atomic(path, &buf)?;
        manifest.outputs.push(path.clone());
    }
    if !test.is_empty() {
        let predictions: Vec<_> = test.iter().map(|s| eval::classify_syntheticity(&model, &s.text).0).collect();
        let gold: Vec<_> = test.iter().map(|s| s.label).collect();
        let scores = eval::prf(&predictions, &gold)?;
        manifest.set("heldout_f_score", scores.f_score.to_string());
        summary.push_str(&format!(
            "\nheld out: P {:.2} R {:.2} F {:.2} on {} samples",
            scores.precision,
            scores.recall,
            scores.f_score,
            test.len()
        ));
    }
    Ok(Outcome::new(manifest, args.manifest.as_ref(), &args.out, summary))
}

#[derive(serde::Serialize)]
struct SynthEvalReport {
    samples: usize,
    #[serde(flatten)]
    scores: eval::Prf,
}

fn cmd_synth_eval(args: SynthEvalArgs, argv: Vec<String>) -> Result<Outcome, ConfigError> {
    let model = SyntheticityModel::load(open(&args.model)?)
        .map_err(|e| ConfigError(format!("{}: {e}", args.model.display())))?;
    let samples = eval::read_labeled(open(&args.io.input)?)
        .map_err(|e| ConfigError(format!("{}: {e}", args.io.input.display())))?;
    let predictions: Vec<_> = samples.iter().map(|s| eval::classify_syntheticity(&model, &s.text).0).collect();
    let gold: Vec<_> = samples.iter().map(|s| s.label).collect();
    let scores = eval::prf(&predictions, &gold)?;
    let mut bytes = serde_json::to_vec_pretty(&SynthEvalReport { samples: samples.len(), scores })?;
    bytes.push(b'\n');
    write_atomic(&args.io.out, &bytes)?;
    let mut manifest = Manifest::new("synth-eval", argv, 0, 1);
    manifest.add_input(&args.model)?;
    manifest.add_input(&args.io.input)?;
    manifest.outputs.push(args.io.out.clone());
    let summary = format!(
        "synth-eval: P {:.2} R {:.2} F {:.2} on {} samples",
        scores.precision,
        scores.recall,
        scores.f_score,
        samples.len()
    );
    Ok(Outcome::new(manifest, args.io.manifest.as_ref(), &args.io.out, summary))
}

fn cmd_conll(args: ConllArgs, argv: Vec<String>) -> Result<Outcome, ConfigError> {
    let docs = corpus::parse_conll(open(&args.io.input)?)
        .map_err(|e| ConfigError(format!("{}: {e}", args.io.input.display())))?;
    write_atomic(&args.io.out, &jsonl_bytes(&docs)?)?;
    let mut manifest = Manifest::new("conll-import", argv, 0, 1);
    manifest.add_input(&args.io.input)?;
    manifest.outputs.push(args.io.out.clone());
    let entities: usize = docs.iter().map(|d| d.gold_spans.as_ref().map_or(0, Vec::len)).sum();
    let summary = format!("conll-import: {} documents, {entities} entities", docs.len());
    Ok(Outcome::new(manifest, args.io.manifest.as_ref(), &args.io.out, summary))
}
