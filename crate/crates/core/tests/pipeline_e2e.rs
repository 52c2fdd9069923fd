mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use common::{toy_dir, DBMS_DEFINITION};
use ontoforge_core::eval::load_questions;
use ontoforge_core::pipeline::{
    evaluate_artifacts, run_all, run_stage, Artifacts, PipelineConfig, PipelineError, Stage,
    StageOutcome,
};
use ontoforge_core::qa::AnswerStatus;

fn toy_config(out: &Path) -> PipelineConfig {
    let mut cfg = PipelineConfig::load(&toy_dir().join("pipeline.toml")).unwrap();
    cfg.output_dir = out.to_path_buf();
    cfg
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect()
}

#[test]
fn full_toy_run_produces_every_artifact() {
    let out = tempfile::tempdir().unwrap();
    let cfg = toy_config(out.path());
    let stages = run_all(&cfg).unwrap();
    assert_eq!(stages.len(), Stage::ALL.len());
    for stage in Stage::ALL {
        for file in stage.outputs() {
            assert!(out.path().join(file).is_file(), "{file} missing");
        }
    }
    let owl = fs::read_to_string(out.path().join("ontology.owl")).unwrap();
    assert!(owl.contains(DBMS_DEFINITION));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("report.json")).unwrap()).unwrap();
    assert!(report["answered_pct"].as_f64().unwrap() >= 80.0);
}

#[test]
fn identical_inputs_give_identical_artifacts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_all(&toy_config(a.path())).unwrap();
    run_all(&toy_config(b.path())).unwrap();
    assert_eq!(snapshot(a.path()), snapshot(b.path()));
}

#[test]
fn rerun_is_a_no_op() {
    let out = tempfile::tempdir().unwrap();
    let cfg = toy_config(out.path());
    run_all(&cfg).unwrap();
    let before = snapshot(out.path());
    for (_, outcome) in run_all(&cfg).unwrap() {
        assert_eq!(outcome, StageOutcome::UpToDate);
    }
    assert_eq!(snapshot(out.path()), before);

    // a changed parameter invalidates extraction
    let mut changed = cfg.clone();
    changed.theta = 0.8;
    assert_eq!(
        run_stage(Stage::Extract, &changed).unwrap(),
        StageOutcome::Ran
    );
}

#[test]
fn tampered_output_is_rebuilt() {
    let out = tempfile::tempdir().unwrap();
    let cfg = toy_config(out.path());
    run_stage(Stage::Ingest, &cfg).unwrap();
    fs::write(out.path().join("corpus.json"), "{}").unwrap();
    assert_eq!(run_stage(Stage::Ingest, &cfg).unwrap(), StageOutcome::Ran);
}

#[test]
fn mine_before_compile_dfa_names_state_table() {
    let out = tempfile::tempdir().unwrap();
    let cfg = toy_config(out.path());
    run_stage(Stage::Ingest, &cfg).unwrap();
    run_stage(Stage::Extract, &cfg).unwrap();
    let err = run_stage(Stage::Mine, &cfg).unwrap_err();
    match &err {
        PipelineError::MissingUpstreamArtifact {
            artifact, stage, ..
        } => {
            assert_eq!(artifact, "state_table");
            assert_eq!(*stage, Stage::CompileDfa);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn missing_corpus_dir_is_a_config_error() {
    let out = tempfile::tempdir().unwrap();
    let mut cfg = toy_config(out.path());
    cfg.corpus_dir = out.path().join("nope");
    assert_eq!(run_stage(Stage::Ingest, &cfg).unwrap_err().exit_code(), 1);
}

#[test]
fn empty_corpus_dir_is_a_data_error() {
    let out = tempfile::tempdir().unwrap();
    let corpus = tempfile::tempdir().unwrap();
    let cfg = PipelineConfig::new(corpus.path(), out.path());
    assert_eq!(run_stage(Stage::Ingest, &cfg).unwrap_err().exit_code(), 3);
}

#[test]
fn artifacts_answer_toy_questions() {
    let out = tempfile::tempdir().unwrap();
    run_all(&toy_config(out.path())).unwrap();
    let artifacts = Artifacts::load(out.path()).unwrap();
    let engine = artifacts.engine();
    let a = engine.answer("define dbms");
    assert_eq!(a.status, AnswerStatus::Answered);
    assert_eq!(a.items[0].feedback, DBMS_DEFINITION);
    assert_eq!(
        engine.answer("What is a blockchain?").status,
        AnswerStatus::NoAnswer
    );

    let questions = load_questions(&toy_dir().join("questions.jsonl")).unwrap();
    assert_eq!(questions.len(), 10);
    let report = evaluate_artifacts(out.path(), &questions, Some(2)).unwrap();
    assert_eq!(report.answered, 8);
    assert_eq!(report.histogram.iter().sum::<usize>(), report.answered);
}
