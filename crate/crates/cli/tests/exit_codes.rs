use std::path::{Path, PathBuf};
use std::process::Command;

fn toy_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/toy/pipeline.toml")
}

fn ontoforge(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ontoforge"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn config_args<'a>(stage: &'a str, config: &'a str, out: &'a str) -> Vec<&'a str> {
    vec![stage, "--config", config, "--output-dir", out]
}

#[test]
fn full_run_then_eval() {
    let out = tempfile::tempdir().unwrap();
    let config = toy_config();
    let (config, dir) = (config.to_str().unwrap(), out.path().to_str().unwrap());
    assert_eq!(ontoforge(&config_args("all", config, dir)).0, 0);
    assert!(out.path().join("ontology.owl").is_file());

    let questions = toy_config().with_file_name("questions.jsonl");
    let (code, stdout) = ontoforge(&[
        "eval",
        "--questions",
        questions.to_str().unwrap(),
        "--artifacts",
        dir,
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("[0.9, 1.0]"), "{stdout}");
}

#[test]
fn missing_upstream_artifact_exits_two() {
    let out = tempfile::tempdir().unwrap();
    let config = toy_config();
    let (config, dir) = (config.to_str().unwrap(), out.path().to_str().unwrap());
    assert_eq!(ontoforge(&config_args("ingest", config, dir)).0, 0);
    assert_eq!(ontoforge(&config_args("extract", config, dir)).0, 0);
    assert_eq!(ontoforge(&config_args("mine", config, dir)).0, 2);
}

#[test]
fn usage_and_config_errors_exit_one() {
    let out = tempfile::tempdir().unwrap();
    let config = toy_config();
    let (config, dir) = (config.to_str().unwrap(), out.path().to_str().unwrap());
    assert_eq!(ontoforge(&["frobnicate"]).0, 1);
    assert_eq!(ontoforge(&["ingest"]).0, 1);
    assert_eq!(ontoforge(&["ingest", "--config", "/nonexistent.toml"]).0, 1);
    let mut args = config_args("extract", config, dir);
    args.extend(["--theta", "1.5"]);
    assert_eq!(ontoforge(&args).0, 1);
    assert_eq!(ontoforge(&["--help"]).0, 0);
}
