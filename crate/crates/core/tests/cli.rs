//! End-to-end runs of the `pseudokit` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_pseudokit");

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn first_text(path: &Path) -> String {
    let line = std::fs::read_to_string(path).unwrap();
    let v: serde_json::Value = serde_json::from_str(line.lines().next().unwrap()).unwrap();
    v["text"].as_str().unwrap().to_string()
}

#[test]
fn sanitize_and_pseudonymize_the_example_sentence() {
    let dir = tempfile::tempdir().unwrap();
    let san = dir.path().join("san.jsonl");
    let ps = dir.path().join("ps.jsonl");
    let input = data("table1.jsonl");
    ok(&["sanitize", "--in", s(&input), "--out", s(&san)]);
    assert_eq!(first_text(&san), "PERSON_1 works at ORGANIZATION_1 in LOCATION_1 with PERSON_2 and PERSON_3.");
    ok(&["pseudonymize", "--in", s(&input), "--kg", s(&data("kg_fixture.jsonl")), "--seed", "7", "--out", s(&ps)]);
    assert_eq!(first_text(&ps), "Sophie works at Manchester Evening News in Manchester with Emma and Tom.");

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "pseudonymize");
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["workers"], 1);
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["documents"]["failed"], 0);
}

#[test]
fn pseudonymize_without_kg_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["pseudonymize", "--in", s(&data("table1.jsonl")), "--out", s(&dir.path().join("o.jsonl"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--kg"));
}

#[test]
fn unreadable_input_and_unknown_flags_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.jsonl");
    assert_eq!(run(&["sanitize", "--in", "/nonexistent/x.jsonl", "--out", s(&out)]).status.code(), Some(2));
    assert_eq!(run(&["sanitize", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["sanitize", "--in", s(&data("table1.jsonl")), "--out", s(&out), "--detector", "spacy"]).status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let docs = data("table1.jsonl");
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("o{i}.jsonl"));
        ok(&["pseudonymize", "--in", s(&docs), "--kg", s(&data("kg_fixture.jsonl")), "--detector", &format!("gazetteer:{}", s(&data("lexicon.tsv"))), "--seed", "3", "--out", s(&out)]);
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn missing_gold_is_a_per_document_failure() {
    let dir = tempfile::tempdir().unwrap();
    let docs = dir.path().join("docs.jsonl");
    std::fs::write(&docs, "{\"id\":\"a\",\"text\":\"Sarah\",\"entities\":[]}\n{\"id\":\"b\",\"text\":\"no gold\"}\n").unwrap();
    let out = dir.path().join("o.jsonl");
    let result = run(&["sanitize", "--in", s(&docs), "--out", s(&out)]);
    assert_eq!(result.status.code(), Some(1));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 1);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["failures"][0]["id"], "b");
}

#[test]
fn corpus_scope_writes_the_link_table() {
    let dir = tempfile::tempdir().unwrap();
    let docs = dir.path().join("docs.jsonl");
    std::fs::write(
        &docs,
        "{\"id\":\"a\",\"text\":\"Ann met Bo\",\"entities\":[{\"start\":0,\"end\":3,\"category\":\"PER\",\"surface\":\"Ann\"}]}\n\
         {\"id\":\"b\",\"text\":\"Bo met Ann\",\"entities\":[{\"start\":0,\"end\":2,\"category\":\"PER\",\"surface\":\"Bo\"},{\"start\":7,\"end\":10,\"category\":\"PER\",\"surface\":\"Ann\"}]}\n",
    )
    .unwrap();
    let out = dir.path().join("o.jsonl");
    ok(&["sanitize", "--in", s(&docs), "--out", s(&out), "--link-scope", "corpus"]);
    let texts: Vec<String> = std::fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["text"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(texts, ["PERSON_1 met Bo", "PERSON_2 met PERSON_1"]);
    let links: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o.jsonl.links.json")).unwrap()).unwrap();
    assert_eq!(links.as_array().unwrap().len(), 2);
}

#[test]
fn external_detector_via_serve_detector() {
    let dir = tempfile::tempdir().unwrap();
    let docs = dir.path().join("docs.jsonl");
    std::fs::write(&docs, "{\"id\":\"a\",\"text\":\"Sarah works at The Times in London with Rachel and David.\"}\n").unwrap();
    let out = dir.path().join("o.jsonl");
    let cmd = format!("external:{} serve-detector --lexicon {}", BIN, s(&data("lexicon.tsv")));
    ok(&["sanitize", "--in", s(&docs), "--out", s(&out), "--detector", &cmd, "--workers", "2"]);
    assert_eq!(first_text(&out), "PERSON_1 works at ORGANIZATION_1 in LOCATION_1 with PERSON_2 and PERSON_3.");
}

#[test]
fn detect_writes_entities() {
    let dir = tempfile::tempdir().unwrap();
    let docs = dir.path().join("docs.jsonl");
    std::fs::write(&docs, "{\"id\":\"a\",\"text\":\"Tom flew from Paris to Osaka.\"}\n").unwrap();
    let out = dir.path().join("o.jsonl");
    ok(&["detect", "--in", s(&docs), "--out", s(&out), "--detector", &format!("gazetteer:{}", s(&data("lexicon.tsv")))]);
    let v: serde_json::Value = serde_json::from_str(std::fs::read_to_string(&out).unwrap().trim()).unwrap();
    let surfaces: Vec<&str> = v["entities"].as_array().unwrap().iter().map(|e| e["surface"].as_str().unwrap()).collect();
    assert_eq!(surfaces, ["Tom", "Paris", "Osaka"]);
}

#[test]
fn llm_chain_on_mocks() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("table5.jsonl");
    let out = dir.path().join("o.jsonl");
    ok(&["llm-pseudonymize", "--in", s(&input), "--out", s(&out), "--mock", s(&data("mock_table5.yaml"))]);
    assert_eq!(
        first_text(&out),
        "Lukas worked in Microsoft for five years before moving from Canada to Spain. Lukas is now working with Olivia in Nestle and living in Madrid."
    );
    ok(&["llm-pseudonymize", "--in", s(&input), "--out", s(&out), "--mock", s(&data("mock_identity.yaml"))]);
    assert_eq!(first_text(&out), first_text(&input));
    let failed = run(&["llm-pseudonymize", "--in", s(&input), "--out", s(&out), "--mock", s(&data("mock_mismatch.yaml"))]);
    assert_eq!(failed.status.code(), Some(1));
    let diag = std::fs::read_to_string(dir.path().join("o.jsonl.diagnostics.jsonl")).unwrap();
    assert!(diag.contains("\"ok\":false"));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "");
    assert_eq!(run(&["llm-pseudonymize", "--in", s(&input), "--out", s(&out)]).status.code(), Some(2));
}

#[test]
fn parallel_corpus_train_and_eval() {
    let dir = tempfile::tempdir().unwrap();
    let kg = pseudokit::KnowledgeGraph::load_path(data("kg_fixture.jsonl")).unwrap();
    let docs = pseudokit::fixture::template_corpus(&kg, 300, 1);
    let corpus = dir.path().join("docs.jsonl");
    let mut buf = Vec::new();
    pseudokit::corpus::write_jsonl(&docs, &mut buf).unwrap();
    std::fs::write(&corpus, buf).unwrap();
    let pairs = dir.path().join("pairs.tsv");
    ok(&["gen-parallel", "--in", s(&corpus), "--out", s(&pairs), "--mode", "sanitize"]);
    assert_eq!(std::fs::read_to_string(&pairs).unwrap().lines().count(), 300);
    let model = dir.path().join("model.json");
    let heldout = dir.path().join("heldout.jsonl");
    ok(&["synth-train", "--pairs", s(&pairs), "--out", s(&model), "--heldout", s(&heldout), "--hash-bits", "16"]);
    assert_eq!(std::fs::read_to_string(&heldout).unwrap().lines().count(), 60);
    let report = dir.path().join("report.json");
    ok(&["synth-eval", "--model", s(&model), "--in", s(&heldout), "--out", s(&report)]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["samples"], 60);
    assert!(v["f_score"].as_f64().unwrap() > 90.0);
}

#[test]
fn eval_privacy_and_conll_import() {
    let dir = tempfile::tempdir().unwrap();
    let gold = dir.path().join("gold.jsonl");
    ok(&["conll-import", "--in", s(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/conll50.txt")), "--out", s(&gold)]);
    let san = dir.path().join("san.jsonl");
    ok(&["sanitize", "--in", s(&gold), "--out", s(&san)]);
    let report = dir.path().join("leak.json");
    ok(&["eval-privacy", "--gold", s(&gold), "--in", s(&san), "--in", s(&gold), "--system", "NER-S", "--system", "identity", "--out", s(&report)]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["rows"][0]["system"], "NER-S");
    assert_eq!(v["rows"][0]["micro"], 0.0);
    assert_eq!(v["rows"][1]["micro"], 100.0);
    assert_eq!(v["rows"][1]["counts"]["PER"]["total"], v["rows"][1]["counts"]["PER"]["leaked"]);
}
