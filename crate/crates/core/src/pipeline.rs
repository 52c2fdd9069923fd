//! Stage orchestration with persisted artifacts.
//!
//! Stages run in the order
//! `ingest → extract → compile-dfa → mine → taxonomy → export-owl → eval`.
//! Each stage reads its upstream artifacts from the output directory, writes
//! its own through a temporary file and a rename, and records SHA-256
//! digests of its inputs and outputs in `manifest.json`. A stage whose
//! recorded inputs and outputs still match is skipped.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::{load_corpus, Corpus, CorpusError};
use crate::dfa::{DfaError, StateTable};
use crate::eval::{self, EvalError, EvalQuestion, EvalReport};
use crate::extract::{
    expand_synonyms_with, extract_candidates, CommonCorpusList, ConceptLexicon, ExtractError,
    ExtractionConfig, SynonymMap, MAX_PHRASE_WORDS,
};
use crate::mining::{
    build_fp_tree, build_transactions, AssociationMatrix, TransactionDb, TransactionError,
};
use crate::ontology::{
    export_owl, prefill_definitions, KnowledgeBase, OntologyError, PropertySchema,
};
use crate::qa::QaEngine;
use crate::taxonomy::{build_hierarchy, ConceptHierarchy, TaxonomyError};

pub const CORPUS: &str = "corpus.json";
pub const CANDIDATES: &str = "candidates.tsv";
pub const LEXICON: &str = "lexicon.json";
pub const STATE_TABLE: &str = "state_table.json";
pub const TRANSACTIONS: &str = "transactions.jsonl";
pub const FP_TREE: &str = "fp_tree.json";
pub const ASSOCIATION: &str = "association.tsv";
pub const HIERARCHY: &str = "hierarchy.json";
pub const HIERARCHY_TEXT: &str = "hierarchy.txt";
pub const ONTOLOGY: &str = "ontology.owl";
pub const KNOWLEDGE_BASE: &str = "knowledge_base.jsonl";
pub const PROPERTIES: &str = "properties.txt";
pub const REPORT: &str = "report.json";
pub const REPORT_TEXT: &str = "report.txt";
pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("missing upstream artifact {artifact} ({file}); run `{stage}` first")]
    MissingUpstreamArtifact {
        artifact: String,
        file: String,
        stage: Stage,
    },
    #[error("failed to access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Artifact { path: PathBuf, message: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Dfa(#[from] DfaError),
    #[error(transparent)]
    Transactions(#[from] TransactionError),
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl PipelineError {
    /// 1 for configuration problems, 2 for a missing upstream artifact,
    /// 3 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 1,
            PipelineError::MissingUpstreamArtifact { .. } => 2,
            _ => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Ingest,
    Extract,
    CompileDfa,
    Mine,
    Taxonomy,
    ExportOwl,
    Eval,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Ingest,
        Stage::Extract,
        Stage::CompileDfa,
        Stage::Mine,
        Stage::Taxonomy,
        Stage::ExportOwl,
        Stage::Eval,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Extract => "extract",
            Stage::CompileDfa => "compile-dfa",
            Stage::Mine => "mine",
            Stage::Taxonomy => "taxonomy",
            Stage::ExportOwl => "export-owl",
            Stage::Eval => "eval",
        }
    }

    /// Files this stage writes.
    pub fn outputs(self) -> &'static [&'static str] {
        match self {
            Stage::Ingest => &[CORPUS],
            Stage::Extract => &[CANDIDATES, LEXICON],
            Stage::CompileDfa => &[STATE_TABLE],
            Stage::Mine => &[TRANSACTIONS, FP_TREE, ASSOCIATION],
            Stage::Taxonomy => &[HIERARCHY, HIERARCHY_TEXT],
            Stage::ExportOwl => &[ONTOLOGY, KNOWLEDGE_BASE, PROPERTIES],
            Stage::Eval => &[REPORT, REPORT_TEXT],
        }
    }

    fn producer(file: &str) -> Stage {
        Stage::ALL
            .into_iter()
            .find(|s| s.outputs().contains(&file))
            .expect("every artifact has a producing stage")
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Stage, PipelineError> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| PipelineError::Config(format!("unknown stage {s:?}")))
    }
}

fn default_theta() -> f64 {
    0.90
}

fn default_max_ngram() -> usize {
    MAX_PHRASE_WORDS
}

fn default_log_base() -> f64 {
    2.0
}

/// Pipeline settings, read from a TOML file. Relative paths resolve against
/// the directory holding the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub corpus_dir: PathBuf,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub common_corpus_path: Option<PathBuf>,
    #[serde(default)]
    pub synonyms_path: Option<PathBuf>,
    #[serde(default)]
    pub triples_path: Option<PathBuf>,
    #[serde(default)]
    pub questions_path: Option<PathBuf>,
    /// Property schema; the bundled one when unset.
    #[serde(default)]
    pub properties_path: Option<PathBuf>,
    /// Terms added to the lexicon after extraction, one per line.
    #[serde(default)]
    pub extra_terms_path: Option<PathBuf>,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default = "default_max_ngram")]
    pub max_ngram: usize,
    #[serde(default = "default_log_base")]
    pub log_base: f64,
    /// LSA rank; `min(50, full rank)` when unset.
    #[serde(default)]
    pub lsa_k: Option<usize>,
    /// Fill missing definitions from the first paragraph naming a concept.
    #[serde(default)]
    pub prefill_definitions: bool,
}

impl PipelineConfig {
    /// Config with defaults and the two mandatory directories.
    pub fn new(corpus_dir: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> PipelineConfig {
        PipelineConfig {
            corpus_dir: corpus_dir.into(),
            output_dir: output_dir.into(),
            common_corpus_path: None,
            synonyms_path: None,
            triples_path: None,
            questions_path: None,
            properties_path: None,
            extra_terms_path: None,
            theta: default_theta(),
            max_ngram: default_max_ngram(),
            log_base: default_log_base(),
            lsa_k: None,
            prefill_definitions: false,
        }
    }

    pub fn load(path: &Path) -> Result<PipelineConfig, PipelineError> {
        let text = fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = PipelineConfig::parse(&text)?;
        if let Some(base) = path.parent() {
            cfg.resolve_paths(base);
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<PipelineConfig, PipelineError> {
        let cfg: PipelineConfig =
            toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Makes every relative path relative to `base` instead.
    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.corpus_dir);
        fix(&mut self.output_dir);
        for p in [
            &mut self.common_corpus_path,
            &mut self.synonyms_path,
            &mut self.triples_path,
            &mut self.questions_path,
            &mut self.properties_path,
            &mut self.extra_terms_path,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        self.extraction()
            .validate()
            .map_err(|e| PipelineError::Config(e.to_string()))?;
        if self.lsa_k == Some(0) {
            return Err(PipelineError::Config("lsa_k must be at least 1".into()));
        }
        Ok(())
    }

    pub fn extraction(&self) -> ExtractionConfig {
        ExtractionConfig {
            theta: self.theta,
            max_ngram: self.max_ngram,
            log_base: self.log_base,
            common_corpus_path: self.common_corpus_path.clone(),
            synonyms_path: self.synonyms_path.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageOutcome {
    Ran,
    /// Inputs and outputs matched the manifest; nothing was written.
    UpToDate,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
struct StageRecord {
    inputs: BTreeMap<String, String>,
    outputs: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
struct Manifest {
    stages: BTreeMap<String, StageRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), PipelineError> {
    let io = |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    };
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn read_input(path: &Path) -> Result<Vec<u8>, PipelineError> {
    if !path.exists() {
        return Err(PipelineError::Config(format!(
            "input {} does not exist",
            path.display()
        )));
    }
    fs::read(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

struct Runner<'a> {
    cfg: &'a PipelineConfig,
    out: &'a Path,
}

impl Runner<'_> {
    fn upstream(&self, file: &str) -> Result<String, PipelineError> {
        let path = self.out.join(file);
        if !path.exists() {
            return Err(PipelineError::MissingUpstreamArtifact {
                artifact: file.split('.').next().unwrap_or(file).to_string(),
                file: file.to_string(),
                stage: Stage::producer(file),
            });
        }
        fs::read_to_string(&path).map_err(|source| PipelineError::Io { path, source })
    }

    fn artifact_err(&self, file: &str, e: impl fmt::Display) -> PipelineError {
        PipelineError::Artifact {
            path: self.out.join(file),
            message: e.to_string(),
        }
    }

    fn corpus(&self) -> Result<Corpus, PipelineError> {
        let text = self.upstream(CORPUS)?;
        Corpus::from_json(&text).map_err(|e| self.artifact_err(CORPUS, e))
    }

    fn lexicon(&self) -> Result<ConceptLexicon, PipelineError> {
        let text = self.upstream(LEXICON)?;
        ConceptLexicon::from_json(&text).map_err(|e| self.artifact_err(LEXICON, e))
    }

    fn transactions(&self) -> Result<TransactionDb, PipelineError> {
        let text = self.upstream(TRANSACTIONS)?;
        TransactionDb::from_jsonl(&text).map_err(|e| self.artifact_err(TRANSACTIONS, e))
    }

    fn schema(&self) -> Result<PropertySchema, PipelineError> {
        match &self.cfg.properties_path {
            Some(p) => {
                read_input(p)?;
                Ok(PropertySchema::load(p)?)
            }
            None => Ok(PropertySchema::default()),
        }
    }

    /// Digests of everything the stage reads, configured files included.
    fn input_digests(&self, stage: Stage) -> Result<BTreeMap<String, String>, PipelineError> {
        let cfg = self.cfg;
        let mut d = BTreeMap::new();
        let upstream =
            |file: &str, d: &mut BTreeMap<String, String>| -> Result<(), PipelineError> {
                let text = self.upstream(file)?;
                d.insert(file.to_string(), sha256_hex(text.as_bytes()));
                Ok(())
            };
        let file = |key: &str,
                    path: &Option<PathBuf>,
                    d: &mut BTreeMap<String, String>|
         -> Result<(), PipelineError> {
            if let Some(p) = path {
                d.insert(key.to_string(), sha256_hex(&read_input(p)?));
            }
            Ok(())
        };
        match stage {
            Stage::Ingest => {
                if !cfg.corpus_dir.is_dir() {
                    return Err(PipelineError::Config(format!(
                        "corpus directory {} does not exist",
                        cfg.corpus_dir.display()
                    )));
                }
                let corpus = load_corpus(&cfg.corpus_dir)?;
                for doc in &corpus.documents {
                    d.insert(
                        format!("corpus/{}", doc.id),
                        sha256_hex(doc.raw_text.as_bytes()),
                    );
                }
            }
            Stage::Extract => {
                upstream(CORPUS, &mut d)?;
                file("common_corpus", &cfg.common_corpus_path, &mut d)?;
                file("synonyms", &cfg.synonyms_path, &mut d)?;
                file("extra_terms", &cfg.extra_terms_path, &mut d)?;
                d.insert(
                    "params".into(),
                    sha256_hex(
                        format!("{}|{}|{}", cfg.theta, cfg.max_ngram, cfg.log_base).as_bytes(),
                    ),
                );
            }
            Stage::CompileDfa => upstream(LEXICON, &mut d)?,
            Stage::Mine => {
                upstream(CORPUS, &mut d)?;
                upstream(LEXICON, &mut d)?;
                upstream(STATE_TABLE, &mut d)?;
            }
            Stage::Taxonomy => {
                upstream(LEXICON, &mut d)?;
                upstream(TRANSACTIONS, &mut d)?;
            }
            Stage::ExportOwl => {
                upstream(LEXICON, &mut d)?;
                upstream(HIERARCHY, &mut d)?;
                if cfg.prefill_definitions {
                    upstream(CORPUS, &mut d)?;
                    upstream(TRANSACTIONS, &mut d)?;
                }
                file("triples", &cfg.triples_path, &mut d)?;
                file("properties", &cfg.properties_path, &mut d)?;
            }
            Stage::Eval => {
                upstream(CORPUS, &mut d)?;
                upstream(LEXICON, &mut d)?;
                upstream(STATE_TABLE, &mut d)?;
                upstream(ONTOLOGY, &mut d)?;
                upstream(KNOWLEDGE_BASE, &mut d)?;
                upstream(PROPERTIES, &mut d)?;
                if cfg.questions_path.is_none() {
                    return Err(PipelineError::Config("eval needs questions_path".into()));
                }
                file("questions", &cfg.questions_path, &mut d)?;
                d.insert(
                    "lsa_k".into(),
                    sha256_hex(format!("{:?}", cfg.lsa_k).as_bytes()),
                );
            }
        }
        Ok(d)
    }

    fn produce(&self, stage: Stage) -> Result<Vec<(&'static str, Vec<u8>)>, PipelineError> {
        let cfg = self.cfg;
        Ok(match stage {
            Stage::Ingest => {
                let corpus = load_corpus(&cfg.corpus_dir)?;
                vec![(CORPUS, corpus.to_json().into_bytes())]
            }
            Stage::Extract => {
                let corpus = self.corpus()?;
                let common = match &cfg.common_corpus_path {
                    Some(p) => CommonCorpusList::load(p)?,
                    None => {
                        log::warn!("no common-language list configured; nothing is filtered");
                        CommonCorpusList::default()
                    }
                };
                let candidates = extract_candidates(&corpus, &cfg.extraction(), &common)?;
                let mut terms: Vec<String> = candidates.iter().map(|c| c.term.clone()).collect();
                if let Some(p) = &cfg.extra_terms_path {
                    terms.extend(read_extra_terms(p)?);
                }
                let synonyms = match &cfg.synonyms_path {
                    Some(p) => SynonymMap::load(p)?,
                    None => SynonymMap::default(),
                };
                let lexicon = expand_synonyms_with(&terms, &synonyms);
                let mut tsv = String::from("term\tscore\toccurrences\n");
                for c in &candidates {
                    tsv.push_str(&format!("{}\t{:.6}\t{}\n", c.term, c.score, c.occurrences));
                }
                vec![
                    (CANDIDATES, tsv.into_bytes()),
                    (LEXICON, lexicon.to_json().into_bytes()),
                ]
            }
            Stage::CompileDfa => {
                let table = StateTable::build(&self.lexicon()?)?;
                vec![(STATE_TABLE, table.to_json().into_bytes())]
            }
            Stage::Mine => {
                let corpus = self.corpus()?;
                let lexicon = self.lexicon()?;
                let text = self.upstream(STATE_TABLE)?;
                let table =
                    StateTable::from_json(&text).map_err(|e| self.artifact_err(STATE_TABLE, e))?;
                let db = build_transactions(&corpus, &table);
                let tree = build_fp_tree(&db, 0);
                let assoc = AssociationMatrix::build(&db);
                vec![
                    (TRANSACTIONS, db.to_jsonl().into_bytes()),
                    (FP_TREE, tree.to_json().into_bytes()),
                    (ASSOCIATION, assoc.to_tsv(&lexicon).into_bytes()),
                ]
            }
            Stage::Taxonomy => {
                let lexicon = self.lexicon()?;
                let db = self.transactions()?;
                let h = build_hierarchy(&build_fp_tree(&db, 0), &AssociationMatrix::build(&db));
                h.validate()?;
                vec![
                    (HIERARCHY, h.to_json(&lexicon).into_bytes()),
                    (HIERARCHY_TEXT, h.to_indented_text(&lexicon).into_bytes()),
                ]
            }
            Stage::ExportOwl => {
                let lexicon = self.lexicon()?;
                let text = self.upstream(HIERARCHY)?;
                let h = ConceptHierarchy::from_json(&text)
                    .map_err(|e| self.artifact_err(HIERARCHY, e))?;
                let schema = self.schema()?;
                let mut kb = match &cfg.triples_path {
                    Some(p) => {
                        read_input(p)?;
                        crate::ontology::load_triples(p, &lexicon, &schema)?
                    }
                    None => KnowledgeBase::default(),
                };
                if cfg.prefill_definitions {
                    let added =
                        prefill_definitions(&mut kb, &self.corpus()?, &self.transactions()?);
                    log::info!("pre-filled {added} definitions from the corpus");
                }
                vec![
                    (ONTOLOGY, export_owl(&h, &kb, &lexicon).into_bytes()),
                    (KNOWLEDGE_BASE, kb.to_jsonl(&lexicon).into_bytes()),
                    (PROPERTIES, schema.to_text().into_bytes()),
                ]
            }
            Stage::Eval => {
                let questions_path = cfg
                    .questions_path
                    .as_ref()
                    .ok_or_else(|| PipelineError::Config("eval needs questions_path".into()))?;
                let questions = eval::load_questions(questions_path)?;
                let report = evaluate_artifacts(self.out, &questions, cfg.lsa_k)?;
                vec![
                    (REPORT, report.to_json().into_bytes()),
                    (REPORT_TEXT, report.to_table().into_bytes()),
                ]
            }
        })
    }
}

fn read_extra_terms(path: &Path) -> Result<Vec<String>, PipelineError> {
    let text = String::from_utf8_lossy(&read_input(path)?).into_owned();
    let mut terms = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let words = crate::corpus::normalize(line);
        if words.len() > MAX_PHRASE_WORDS {
            log::warn!("extra term {line:?} is longer than {MAX_PHRASE_WORDS} words, skipped");
            continue;
        }
        terms.push(words.join(" "));
    }
    Ok(terms)
}

fn load_manifest(out: &Path) -> Manifest {
    fs::read_to_string(out.join(MANIFEST))
        .ok()
        .and_then(|t| serde_json::from_str(&t).ok())
        .unwrap_or_default()
}

/// Runs one stage, or confirms it is up to date.
pub fn run_stage(stage: Stage, cfg: &PipelineConfig) -> Result<StageOutcome, PipelineError> {
    cfg.validate()?;
    let out = cfg.output_dir.as_path();
    fs::create_dir_all(out).map_err(|source| PipelineError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let runner = Runner { cfg, out };
    let inputs = runner.input_digests(stage)?;

    let mut manifest = load_manifest(out);
    if let Some(rec) = manifest.stages.get(stage.name()) {
        let outputs_intact = stage.outputs().iter().all(|f| {
            let recorded = rec.outputs.get(*f);
            let actual = fs::read(out.join(f)).ok().map(|b| sha256_hex(&b));
            recorded.is_some() && recorded == actual.as_ref()
        });
        if rec.inputs == inputs && outputs_intact {
            log::info!("{stage}: up to date");
            return Ok(StageOutcome::UpToDate);
        }
    }

    let files = runner.produce(stage)?;
    let mut outputs = BTreeMap::new();
    for (name, bytes) in files {
        write_atomic(&out.join(name), &bytes)?;
        outputs.insert(name.to_string(), sha256_hex(&bytes));
    }
    manifest
        .stages
        .insert(stage.name().to_string(), StageRecord { inputs, outputs });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_atomic(&out.join(MANIFEST), text.as_bytes())?;
    log::info!("{stage}: done");
    Ok(StageOutcome::Ran)
}

/// Runs every stage up to `export-owl`, plus `eval` when questions are
/// configured.
pub fn run_all(cfg: &PipelineConfig) -> Result<Vec<(Stage, StageOutcome)>, PipelineError> {
    let mut done = Vec::new();
    for stage in Stage::ALL {
        if stage == Stage::Eval && cfg.questions_path.is_none() {
            continue;
        }
        done.push((stage, run_stage(stage, cfg)?));
    }
    Ok(done)
}

/// Artifacts needed to answer questions and browse the hierarchy.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub lexicon: ConceptLexicon,
    pub table: StateTable,
    pub hierarchy: ConceptHierarchy,
    pub schema: PropertySchema,
    pub kb: KnowledgeBase,
}

impl Artifacts {
    pub fn load(dir: &Path) -> Result<Artifacts, PipelineError> {
        let cfg = PipelineConfig::new(dir, dir);
        let r = Runner {
            cfg: &cfg,
            out: dir,
        };
        let lexicon = r.lexicon()?;
        let table = StateTable::from_json(&r.upstream(STATE_TABLE)?)
            .map_err(|e| r.artifact_err(STATE_TABLE, e))?;
        let hierarchy = ConceptHierarchy::from_json(&r.upstream(HIERARCHY)?)
            .map_err(|e| r.artifact_err(HIERARCHY, e))?;
        let schema = PropertySchema::parse(&r.upstream(PROPERTIES)?, PROPERTIES)
            .map_err(|e| r.artifact_err(PROPERTIES, e))?;
        let kb = KnowledgeBase::parse(
            &r.upstream(KNOWLEDGE_BASE)?,
            KNOWLEDGE_BASE,
            &lexicon,
            &schema,
        )
        .map_err(|e| r.artifact_err(KNOWLEDGE_BASE, e))?;
        Ok(Artifacts {
            lexicon,
            table,
            hierarchy,
            schema,
            kb,
        })
    }

    pub fn engine(&self) -> QaEngine {
        QaEngine::new(
            self.lexicon.clone(),
            self.table.clone(),
            self.schema.clone(),
            self.kb.clone(),
        )
    }
}

/// Evaluates `questions` against the artifacts in `dir`, training LSA on the
/// stored corpus at rank `k` (the default rank when `None`).
pub fn evaluate_artifacts(
    dir: &Path,
    questions: &[EvalQuestion],
    k: Option<usize>,
) -> Result<EvalReport, PipelineError> {
    let artifacts = Artifacts::load(dir)?;
    let cfg = PipelineConfig::new(dir, dir);
    let corpus = Runner {
        cfg: &cfg,
        out: dir,
    }
    .corpus()?;
    let k = match k {
        Some(k) => k,
        None => eval::default_rank(&corpus)?,
    };
    let model = eval::train_lsa(&corpus, k)?;
    Ok(eval::evaluate_batch(questions, &artifacts.engine(), &model))
}
