//! Command line front end: pipeline stages, batch evaluation and the HTTP
//! question-answering service.

pub mod server;

use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use ontoforge_core::eval::load_questions;
use ontoforge_core::pipeline::{
    evaluate_artifacts, run_all, run_stage, write_atomic, Artifacts, PipelineConfig, PipelineError,
    Stage, StageOutcome,
};

#[derive(Debug, Parser)]
#[command(
    name = "ontoforge",
    version,
    about = "Build a subject ontology from course text and answer questions with it"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load the corpus directory into corpus.json.
    Ingest(StageArgs),
    /// Score terms and write the concept lexicon.
    Extract(StageArgs),
    /// Compile the lexicon into a state table.
    CompileDfa(StageArgs),
    /// Build transactions, the FP-tree and the association matrix.
    Mine(StageArgs),
    /// Turn the FP-tree into a concept hierarchy.
    Taxonomy(StageArgs),
    /// Write the OWL ontology and the knowledge base.
    ExportOwl(StageArgs),
    /// Run every stage in order.
    All(StageArgs),
    /// Answer a question file and report LSA similarity to key answers.
    Eval(EvalArgs),
    /// Serve the question-answering API.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct StageArgs {
    /// TOML pipeline configuration.
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Args, Default)]
pub struct Overrides {
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub max_ngram: Option<usize>,
    #[arg(long)]
    pub log_base: Option<f64>,
    #[arg(long)]
    pub lsa_k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Run the eval stage from a pipeline configuration.
    #[arg(long, conflicts_with_all = ["questions", "artifacts"])]
    pub config: Option<PathBuf>,
    /// JSON-lines file of {id, question, key_answer}.
    #[arg(long, requires = "artifacts")]
    pub questions: Option<PathBuf>,
    /// Directory holding pipeline artifacts.
    #[arg(long, requires = "questions")]
    pub artifacts: Option<PathBuf>,
    /// LSA rank.
    #[arg(long)]
    pub k: Option<usize>,
    /// Also write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Directory holding pipeline artifacts.
    #[arg(long, required_unless_present = "config")]
    pub artifacts: Option<PathBuf>,
    /// Take the artifact directory from a pipeline configuration.
    #[arg(long, conflicts_with = "artifacts")]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: IpAddr,
    /// Static files served for every path outside the API.
    #[arg(long)]
    pub ui: Option<PathBuf>,
}

fn load_config(path: &Path, o: &Overrides) -> Result<PipelineConfig, PipelineError> {
    let mut cfg = PipelineConfig::load(path)?;
    if let Some(d) = &o.output_dir {
        cfg.output_dir = d.clone();
    }
    if let Some(t) = o.theta {
        cfg.theta = t;
    }
    if let Some(n) = o.max_ngram {
        cfg.max_ngram = n;
    }
    if let Some(b) = o.log_base {
        cfg.log_base = b;
    }
    if o.lsa_k.is_some() {
        cfg.lsa_k = o.lsa_k;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn report_outcome(stage: Stage, outcome: StageOutcome) {
    match outcome {
        StageOutcome::Ran => println!("{stage}: done"),
        StageOutcome::UpToDate => println!("{stage}: up to date"),
    }
}

/// Runs a parsed command; the result is the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<(), PipelineError> {
    let stage = |args: StageArgs, stage: Stage| -> Result<(), PipelineError> {
        let cfg = load_config(&args.config, &args.overrides)?;
        report_outcome(stage, run_stage(stage, &cfg)?);
        Ok(())
    };
    match command {
        Command::Ingest(a) => stage(a, Stage::Ingest),
        Command::Extract(a) => stage(a, Stage::Extract),
        Command::CompileDfa(a) => stage(a, Stage::CompileDfa),
        Command::Mine(a) => stage(a, Stage::Mine),
        Command::Taxonomy(a) => stage(a, Stage::Taxonomy),
        Command::ExportOwl(a) => stage(a, Stage::ExportOwl),
        Command::All(a) => {
            let cfg = load_config(&a.config, &a.overrides)?;
            for (s, outcome) in run_all(&cfg)? {
                report_outcome(s, outcome);
            }
            Ok(())
        }
        Command::Eval(a) => eval(a),
        Command::Serve(a) => serve(a),
    }
}

fn eval(a: EvalArgs) -> Result<(), PipelineError> {
    if let Some(config) = &a.config {
        let overrides = Overrides {
            lsa_k: a.k,
            ..Overrides::default()
        };
        let cfg = load_config(config, &overrides)?;
        report_outcome(Stage::Eval, run_stage(Stage::Eval, &cfg)?);
        let table = cfg.output_dir.join(ontoforge_core::pipeline::REPORT_TEXT);
        if let Ok(text) = std::fs::read_to_string(table) {
            print!("{text}");
        }
        return Ok(());
    }
    let (Some(questions), Some(artifacts)) = (&a.questions, &a.artifacts) else {
        return Err(PipelineError::Config(
            "eval needs --config or --questions with --artifacts".into(),
        ));
    };
    let questions = load_questions(questions)?;
    let report = evaluate_artifacts(artifacts, &questions, a.k)?;
    if let Some(path) = &a.report {
        write_atomic(path, report.to_json().as_bytes())?;
    }
    print!("{}", report.to_table());
    Ok(())
}

fn serve(a: ServeArgs) -> Result<(), PipelineError> {
    let dir = match (&a.artifacts, &a.config) {
        (Some(d), _) => d.clone(),
        (None, Some(c)) => PipelineConfig::load(c)?.output_dir,
        (None, None) => {
            return Err(PipelineError::Config(
                "serve needs --artifacts or --config".into(),
            ))
        }
    };
    let artifacts = Artifacts::load(&dir)?;
    let state = Arc::new(server::AppState::new(&artifacts));
    let addr = SocketAddr::new(a.host, a.port);
    let runtime = tokio::runtime::Runtime::new().map_err(|source| PipelineError::Io {
        path: dir.clone(),
        source,
    })?;
    runtime
        .block_on(server::serve(state, addr, a.ui))
        .map_err(|source| PipelineError::Io { path: dir, source })
}
