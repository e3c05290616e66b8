use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use argmine::classifiers::ModelKind;
use argmine::corpus::{import_gold_labels, read_label_rows, thread_to_json, CorpusSummary, LabelSet, LabeledThread};
use argmine::evaluation::{cohens_kappa, nested_cv, CvConfig, HyperGrid, DEFAULT_GRID_ALPHA, DEFAULT_GRID_C};
use argmine::features::{build_examples, parse_feature_sets, CategoryLexicon, FeatureConfig, NgramRange};
use argmine::par::Execution;
use argmine::pipeline::{
    corpus_stats, export_view_json, run_two_layer_inference, thread_stats, train_layer, write_view_file, LabelSource,
    ModelBundle,
};
use argmine::task::Task;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::docs::{emit, expand_inputs, load_annotated, load_corpus, load_labeled};
use crate::fetch::{Fetcher, FixtureTransport, HttpTransport, RetryPolicy, Transport, DEFAULT_API_BASE};
use crate::serve::{serve, Site};

#[derive(Debug, Parser)]
#[command(name = "argmine", version, about = "Argument mining for issue-tracker discussions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Download an issue and its comments as a thread document
    Fetch(FetchArgs),
    /// Split every comment of a thread into quotes
    Segment(SegmentArgs),
    /// Attach gold labels from a CSV to a segmented thread
    ImportLabels(ImportArgs),
    /// Train the level1, component and standpoint models
    Train(TrainArgs),
    /// Nested cross-validation of one task
    Evaluate(EvaluateArgs),
    /// Two-layer inference with a trained model directory
    Predict(PredictArgs),
    /// Argument counts and against/support ratios
    Stats(StatsArgs),
    /// Cohen's kappa between two label files
    Kappa(KappaArgs),
    /// Write viewer JSON files
    ExportView(ExportArgs),
    /// Serve exported viewer files over HTTP
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    /// Repository as owner/name
    #[arg(long)]
    pub repo: String,
    #[arg(long)]
    pub issue: u64,
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Name of the environment variable holding the API token
    #[arg(long, default_value = "GITHUB_TOKEN")]
    pub token_env: String,
    #[arg(long, default_value = DEFAULT_API_BASE)]
    pub api_base: String,
    /// Replay recorded responses from this file instead of the network
    #[arg(long)]
    pub fixture: Option<PathBuf>,
    /// Delay before the first retry, in milliseconds
    #[arg(long, default_value_t = 1000)]
    pub backoff_ms: u64,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Thread document
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ImportArgs {
    /// Segmented thread (or raw thread document)
    #[arg(long)]
    pub input: PathBuf,
    /// CSV with quote_id,level1,component,standpoint,argument_id,span_start,span_end
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Svm,
    Cnb,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Svm => ModelKind::Svm,
            ModelArg::Cnb => ModelKind::Cnb,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaskArg {
    Level1,
    Component,
    Standpoint,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Self {
        match t {
            TaskArg::Level1 => Task::Level1,
            TaskArg::Component => Task::Component,
            TaskArg::Standpoint => Task::Standpoint,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Gold,
    Predicted,
}

/// Options shared by `train` and `evaluate`.
#[derive(Debug, Args)]
pub struct ModelOpts {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Comma-separated feature sets: tfidf,pos,politeness,conv,lexicon or all
    #[arg(long, default_value = "all")]
    pub features: String,
    #[arg(long, value_enum, default_value_t = ModelArg::Svm)]
    pub model: ModelArg,
    /// Token n-gram range as lo,hi
    #[arg(long, default_value = "1,3")]
    pub ngram_range: NgramRange,
    /// POS-tag n-gram range as lo,hi
    #[arg(long, default_value = "1,3")]
    pub pos_range: NgramRange,
    #[arg(long, default_value_t = 5)]
    pub outer_k: usize,
    #[arg(long, default_value_t = 3)]
    pub inner_k: usize,
    /// Comma-separated SVM C values
    #[arg(long, value_delimiter = ',')]
    pub grid_c: Vec<f64>,
    /// Comma-separated CNB smoothing values
    #[arg(long, value_delimiter = ',')]
    pub grid_alpha: Vec<f64>,
    /// Category lexicon file for the lexicon feature set
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Raw n-gram counts instead of TF-IDF weights
    #[arg(long)]
    pub raw_counts: bool,
    /// Run folds and feature extraction on one thread
    #[arg(long)]
    pub sequential: bool,
}

impl ModelOpts {
    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }

    pub fn cv_config(&self, task: Task) -> Result<CvConfig> {
        let lexicon = self.lexicon.as_deref().map(CategoryLexicon::from_path).transpose()?;
        let sets = parse_feature_sets(&self.features, lexicon.is_some())?;
        let mut features = FeatureConfig::new(sets);
        features.tfidf_range = self.ngram_range;
        features.pos_range = self.pos_range;
        features.raw_counts = self.raw_counts;
        if let Some(l) = lexicon {
            features = features.with_lexicon(l);
        }
        let mut cfg = CvConfig::new(task, self.model.into(), features);
        let c = if self.grid_c.is_empty() { DEFAULT_GRID_C.to_vec() } else { self.grid_c.clone() };
        let a = if self.grid_alpha.is_empty() { DEFAULT_GRID_ALPHA.to_vec() } else { self.grid_alpha.clone() };
        cfg.grid = HyperGrid::new(c, a)?;
        cfg.outer_k = self.outer_k;
        cfg.inner_k = self.inner_k;
        cfg.seed = self.seed;
        cfg.exec = self.exec();
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Labeled thread files or directories of them
    #[arg(long, required = true, num_args = 1..)]
    pub corpus: Vec<PathBuf>,
    /// Model directory to write
    #[arg(long)]
    pub out: PathBuf,
    /// Fixed hyperparameter (C or alpha) instead of a grid search
    #[arg(long)]
    pub hyper: Option<f64>,
    #[command(flatten)]
    pub opts: ModelOpts,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long, required = true, num_args = 1..)]
    pub corpus: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = TaskArg::Level1)]
    pub task: TaskArg,
    /// Write the JSON report here
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print JSON instead of the table
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub opts: ModelOpts,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Directory written by `train`
    #[arg(long)]
    pub models: PathBuf,
    /// Thread files (raw, segmented or labeled) or directories of them
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    /// Write one `<id>.json` per thread here; stdout when omitted
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Annotated or labeled thread files, or directories of them
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = SourceArg::Gold)]
    pub source: SourceArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KappaArgs {
    /// Label CSV of the first rater
    #[arg(long)]
    pub a: PathBuf,
    /// Label CSV of the second rater
    #[arg(long)]
    pub b: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Annotated or labeled thread files, or directories of them
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Keep only the first N comments of each thread
    #[arg(long)]
    pub max_comments: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Directory of exported `<id>.json` files
    #[arg(long)]
    pub dir: PathBuf,
    /// Directory of static viewer assets
    #[arg(long)]
    pub assets: Option<PathBuf>,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value_t = 4)]
    pub workers: usize,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fetch(a) => fetch(a),
        Command::Segment(a) => segment(a),
        Command::ImportLabels(a) => import_labels(a),
        Command::Train(a) => train(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Predict(a) => predict(a),
        Command::Stats(a) => stats(a),
        Command::Kappa(a) => kappa(a),
        Command::ExportView(a) => export_view(a),
        Command::Serve(a) => serve_cmd(a),
    }
}

fn pretty<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn fetch(a: FetchArgs) -> Result<()> {
    let token = std::env::var(&a.token_env).ok().filter(|t| !t.is_empty());
    if token.is_none() && a.fixture.is_none() {
        log::warn!("{} is not set; using unauthenticated requests", a.token_env);
    }
    let transport: Box<dyn Transport> = match &a.fixture {
        Some(p) => Box::new(FixtureTransport::from_path(p)?),
        None => Box::new(HttpTransport::new()?),
    };
    let fetcher = Fetcher {
        transport: transport.as_ref(),
        api_base: a.api_base,
        token,
        retry: RetryPolicy {
            attempts: 3,
            base_delay: Duration::from_millis(a.backoff_ms),
        },
    };
    let thread = fetcher.fetch_issue(&a.repo, a.issue)?;
    emit(a.out.as_deref(), &(thread_to_json(&thread) + "\n"))
}

fn segment(a: SegmentArgs) -> Result<()> {
    let doc = load_labeled(&a.input)?;
    let doc = LabeledThread::unlabeled(doc.thread);
    log::info!("thread {}: {} quotes", doc.thread.id, doc.quotes.len());
    emit(a.out.as_deref(), &pretty(&doc)?)
}

fn import_labels(a: ImportArgs) -> Result<()> {
    let mut doc = load_labeled(&a.input)?;
    let rows = fs::File::open(&a.labels).with_context(|| format!("opening {}", a.labels.display()))?;
    doc.quotes = import_gold_labels(rows, &doc.quotes).with_context(|| a.labels.display().to_string())?;
    let summary = CorpusSummary::from_quotes(&doc.quotes);
    eprintln!("{}", serde_json::to_string(&summary)?);
    emit(a.out.as_deref(), &pretty(&doc)?)
}

fn train(a: TrainArgs) -> Result<()> {
    let corpus = load_corpus(&a.corpus)?;
    let exec = a.opts.exec();
    let examples = build_examples(&corpus, exec);
    let layer = |task| -> Result<_> {
        let cfg = a.opts.cv_config(task)?;
        train_layer(&examples, &cfg, a.hyper).with_context(|| format!("training the {task} model"))
    };
    let bundle = ModelBundle {
        level1: layer(Task::Level1)?,
        component: layer(Task::Component)?,
        standpoint: layer(Task::Standpoint)?,
    };
    bundle.save(&a.out)?;
    for l in bundle.layers() {
        println!(
            "{}: {} {}={} over {} columns",
            l.task,
            l.model.kind(),
            l.model.kind().hyper_name(),
            l.model.hyperparameter(),
            l.model.dim()
        );
    }
    println!("models written to {}", a.out.display());
    Ok(())
}

fn evaluate(a: EvaluateArgs) -> Result<()> {
    let corpus = load_corpus(&a.corpus)?;
    let cfg = a.opts.cv_config(a.task.into())?;
    let examples = build_examples(&corpus, cfg.exec);
    let report = nested_cv(&examples, &cfg)?;
    let json = report.to_json() + "\n";
    if let Some(p) = &a.out {
        emit(Some(p), &json)?;
    }
    if a.json {
        emit(None, &json)
    } else {
        emit(None, &report.to_table())
    }
}

fn predict(a: PredictArgs) -> Result<()> {
    let bundle = ModelBundle::load(&a.models).with_context(|| format!("loading models from {}", a.models.display()))?;
    let inputs = expand_inputs(&a.input)?;
    for path in &inputs {
        let doc = load_labeled(path)?;
        let annotated = run_two_layer_inference(&doc, &bundle)?;
        match &a.out_dir {
            Some(dir) => {
                let written = write_view_file(dir, &annotated, None)?;
                log::info!("{} -> {}", path.display(), written.display());
            }
            None => emit(None, &export_view_json(&annotated, None))?,
        }
    }
    Ok(())
}

fn stats(a: StatsArgs) -> Result<()> {
    let source = match a.source {
        SourceArg::Gold => LabelSource::Gold,
        SourceArg::Predicted => LabelSource::Predicted,
    };
    let mut threads = Vec::new();
    for path in expand_inputs(&a.input)? {
        let annotated = load_annotated(&path)?;
        threads.push(thread_stats(&annotated, source).with_context(|| path.display().to_string())?);
    }
    #[derive(Serialize)]
    struct Out<'a> {
        corpus: argmine::pipeline::CorpusStats,
        threads: &'a [argmine::pipeline::ThreadStats],
    }
    let out = Out {
        corpus: corpus_stats(&threads),
        threads: &threads,
    };
    emit(a.out.as_deref(), &pretty(&out)?)
}

#[derive(Debug, Serialize, PartialEq)]
pub struct Agreement {
    pub pairs: usize,
    pub kappa: Option<f64>,
}

#[derive(Debug, Serialize, PartialEq)]
pub struct KappaReport {
    pub level1: Agreement,
    pub component: Agreement,
    pub standpoint: Agreement,
}

fn read_whole_labels(path: &Path) -> Result<BTreeMap<u32, LabelSet>> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = BTreeMap::new();
    for r in read_label_rows(file).with_context(|| path.display().to_string())? {
        if r.span.is_some() {
            log::warn!("{}: row {} is a sub-segment and is ignored", path.display(), r.row);
            continue;
        }
        if out.insert(r.quote_id, r.labels).is_some() {
            bail!("{}: quote {} labeled twice", path.display(), r.quote_id);
        }
    }
    Ok(out)
}

/// Agreement per coding dimension over quotes both raters labeled. Component
/// and standpoint use only quotes both raters called argumentative.
pub fn kappa_report(a: &BTreeMap<u32, LabelSet>, b: &BTreeMap<u32, LabelSet>) -> Result<KappaReport> {
    let both: Vec<(&LabelSet, &LabelSet)> = a.iter().filter_map(|(id, la)| Some((la, b.get(id)?))).collect();
    let agree = |pairs: Vec<(String, String)>| -> Result<Agreement> {
        if pairs.is_empty() {
            return Ok(Agreement { pairs: 0, kappa: None });
        }
        let (x, y): (Vec<String>, Vec<String>) = pairs.into_iter().unzip();
        Ok(Agreement {
            pairs: x.len(),
            kappa: Some(cohens_kappa(&x, &y)?),
        })
    };
    let level1 = both.iter().map(|(x, y)| (x.level1.to_string(), y.level1.to_string())).collect();
    let args: Vec<_> = both.iter().filter(|(x, y)| x.is_argumentative() && y.is_argumentative()).collect();
    let dim = |f: fn(&LabelSet) -> Option<String>| args.iter().filter_map(|(x, y)| Some((f(x)?, f(y)?))).collect();
    Ok(KappaReport {
        level1: agree(level1)?,
        component: agree(dim(|l| l.component.map(|c| c.to_string())))?,
        standpoint: agree(dim(|l| l.standpoint.map(|s| s.to_string())))?,
    })
}

fn kappa(a: KappaArgs) -> Result<()> {
    let ra = read_whole_labels(&a.a)?;
    let rb = read_whole_labels(&a.b)?;
    let report = kappa_report(&ra, &rb)?;
    if report.level1.pairs == 0 {
        bail!("the two label files share no quote ids");
    }
    emit(None, &pretty(&report)?)
}

fn export_view(a: ExportArgs) -> Result<()> {
    for path in expand_inputs(&a.input)? {
        let annotated = load_annotated(&path)?;
        let written = write_view_file(&a.out_dir, &annotated, a.max_comments)?;
        println!("{}", written.display());
    }
    Ok(())
}

fn serve_cmd(a: ServeArgs) -> Result<()> {
    if !a.dir.is_dir() {
        bail!("{} is not a directory", a.dir.display());
    }
    let site = Site {
        data_dir: a.dir,
        assets_dir: a.assets,
    };
    serve(site, &format!("{}:{}", a.host, a.port), a.workers)
}
