mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use svgforge::pipeline::DatasetRecord;

fn svgforge(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_svgforge"));
    cmd.args(args);
    for key in ["JOBS", "SEED", "QUIET", "STRICT", "TOLERANCE", "ALPHA", "BETA", "GAMMA", "SEMANTICS", "EPOCHS"] {
        cmd.env_remove(format!("SVGFORGE_{key}"));
    }
    cmd
}

fn run(mut cmd: Command) -> Output {
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn jsonl(path: &Path) -> Vec<Value> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn write(path: &Path, text: &str) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, text).unwrap();
}

const SQUARE: &str = r#"<svg viewBox="0 0 10 10"><rect x="1" y="1" width="8" height="8"/></svg>"#;
const CIRCLE: &str = r##"<svg viewBox="0 0 10 10"><circle cx="5" cy="5" r="4" fill="#f00"/></svg>"##;
const LINES: &str = r#"<svg viewBox="0 0 10 10"><path d="M1 1H9V9H1z"/></svg>"#;
const TRUNCATED: &str = r#"<svg viewBox="0 0 10 10"><path d="M1 1H9V"#;

#[test]
fn normalize_valid_and_broken_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw");
    write(&raw.join("a.svg"), SQUARE);
    write(&raw.join("nested/b.svg"), CIRCLE);
    write(&raw.join("c.svg"), LINES);
    let out = dir.path().join("out");
    let report = dir.path().join("report.json");
    let o = run(svgforge(&["normalize", p(&raw), p(&out), "--report", p(&report)]));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for rel in ["a.svg", "nested/b.svg", "c.svg"] {
        assert!(out.join(rel).is_file(), "{rel}");
    }
    let report: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(report.is_object());

    // Normalizing the output again changes nothing.
    let again = dir.path().join("again");
    assert_eq!(code(&run(svgforge(&["normalize", p(&out), p(&again)]))), 0);
    for rel in ["a.svg", "nested/b.svg", "c.svg"] {
        assert_eq!(fs::read(out.join(rel)).unwrap(), fs::read(again.join(rel)).unwrap());
    }

    write(&raw.join("nested/b.svg"), TRUNCATED);
    let broken_out = dir.path().join("broken");
    let o = run(svgforge(&["normalize", p(&raw), p(&broken_out)]));
    assert_eq!(code(&o), 1);
    assert!(broken_out.join("a.svg").is_file() && !broken_out.join("nested/b.svg").exists());
    let errors = jsonl(&broken_out.join("errors.jsonl"));
    assert_eq!(errors.len(), 1);
    assert_eq!(errors[0]["id"], "nested__b");
    assert_eq!(errors[0]["kind"], "MalformedXml");

    let o = run(svgforge(&["normalize", p(&raw), p(&dir.path().join("strict")), "--strict"]));
    assert_eq!(code(&o), 2);
}

#[test]
fn classify_records_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw");
    write(&raw.join("square.svg"), SQUARE);
    let mut many = String::from(r##"<svg viewBox="0 0 100 100"><path fill="#00f" d="M0 0"##);
    for i in 0..59 {
        many.push_str(&format!("L{} {}", i + 1, (i * 7) % 50));
    }
    many.push_str(r##""/><path fill="#0f0" d="M50 50"##);
    for i in 0..59 {
        many.push_str(&format!("L{} {}", 50 + i % 40, 50 + (i * 3) % 40));
    }
    many.push_str(r#""/></svg>"#);
    write(&raw.join("two_color.svg"), &many);
    write(&raw.join("bad.svg"), TRUNCATED);
    let records = dir.path().join("records.jsonl");
    let o = run(svgforge(&["classify", p(&raw), "--out", p(&records)]));
    assert_eq!(code(&o), 1);
    let rows: Vec<DatasetRecord> = jsonl(&records).into_iter().map(|v| serde_json::from_value(v).unwrap()).collect();
    let errors = jsonl(&dir.path().join("records.errors.jsonl"));
    assert_eq!(rows.len() + errors.len(), 3);
    assert_eq!(rows.iter().map(|r| r.id.as_str()).collect::<Vec<_>>(), ["square", "two_color"]);
    assert_eq!(rows[0].command_count, 5);
    assert_eq!(rows[0].color_category, "Monochrome");
    assert_eq!(rows[0].difficulty_level, "Monocolor_easy");
    assert_eq!(rows[1].command_count, 120);
    assert_eq!(rows[1].difficulty_level, "Multicolor_difficult");
    for r in &rows {
        assert!(r.self_check().unwrap(), "{}", r.id);
        assert_eq!(svgforge::integrity_indicator(&r.svg), 1);
    }

    let empty = dir.path().join("empty");
    fs::create_dir_all(&empty).unwrap();
    let out = dir.path().join("none.jsonl");
    assert_eq!(code(&run(svgforge(&["classify", p(&empty), "--out", p(&out)]))), 0);
    assert!(jsonl(&out).is_empty());
}

fn classify_corpus(dir: &Path) -> std::path::PathBuf {
    let records = dir.join("corpus.jsonl");
    let o = run(svgforge(&["classify", p(&common::corpus_dir()), "--out", p(&records)]));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    records
}

#[test]
fn stats_and_curriculum() {
    let dir = tempfile::tempdir().unwrap();
    let records = classify_corpus(dir.path());
    let n = jsonl(&records).len();

    let o = run(svgforge(&["stats", p(&records)]));
    assert_eq!(code(&o), 0);
    let stats: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(stats["total"], n);
    let per_category: u64 = stats["categories"]
        .as_object()
        .unwrap()
        .values()
        .map(|c| c["histogram"].as_object().unwrap().values().map(|v| v.as_u64().unwrap()).sum::<u64>())
        .sum();
    assert_eq!(per_category as usize, n);

    let manifest_path = dir.path().join("manifest.json");
    let o = run(svgforge(&[
        "curriculum",
        p(&records),
        "--epochs",
        "2,2,4,4",
        "--extension-stage",
        "cot",
        "--out",
        p(&manifest_path),
    ]));
    assert_eq!(code(&o), 0);
    let m: Value = serde_json::from_str(&fs::read_to_string(&manifest_path).unwrap()).unwrap();
    let stages = m["stages"].as_array().unwrap();
    assert_eq!(stages.len(), 5);
    assert_eq!(stages.iter().map(|s| s["epochs"].as_u64().unwrap()).collect::<Vec<_>>(), [2, 2, 4, 4, 3]);
    let staged: usize = stages.iter().map(|s| s["record_ids"].as_array().unwrap().len()).sum();
    assert_eq!(staged + m["excluded_out_of_range"].as_array().unwrap().len(), n);

    let bad = dir.path().join("bad.jsonl");
    fs::write(&bad, "{\"id\": 1}\n").unwrap();
    assert_eq!(code(&run(svgforge(&["stats", p(&bad)]))), 2);
}

#[test]
fn score_rows() {
    let dir = tempfile::tempdir().unwrap();
    let four = r#"<svg viewBox="0 0 10 10"><path d="M0 0h1v1z"/><path d="M2 0h1v1z"/><path d="M4 0h1v1z"/><path d="M6 0h1v1z"/></svg>"#;
    let five = r#"<svg viewBox="0 0 10 10"><path d="M0 0h1v1z"/><path d="M2 0h1v1z"/><path d="M4 0h1v1z"/><path d="M6 0h1v1z"/><path d="M8 0h1v1z"/></svg>"#;
    let pairs = dir.path().join("pairs.jsonl");
    let rows = [
        serde_json::json!({"id": "same", "generated": five, "reference": five}),
        serde_json::json!({"id": "cut", "generated": TRUNCATED, "reference": five}),
        serde_json::json!({"id": "short", "generated": four, "reference": five}),
        serde_json::json!({"id": "noref", "generated": four, "reference": "<svg"}),
    ];
    fs::write(&pairs, rows.iter().map(|r| r.to_string() + "\n").collect::<String>()).unwrap();
    let out = dir.path().join("scored.jsonl");
    let o = run(svgforge(&["score", p(&pairs), "--out", p(&out)]));
    assert_eq!(code(&o), 1);
    let scored = jsonl(&out);
    assert_eq!(scored.len(), 3);
    assert_eq!(scored[0]["total"], 2.0);
    assert_eq!(scored[1]["integrity"], 0.0);
    assert!(scored[1]["total"].as_f64().unwrap() < 1.0);
    assert!((scored[2]["match"].as_f64().unwrap() - (-1.0f64).exp()).abs() < 1e-12);
    let errors = jsonl(&dir.path().join("scored.errors.jsonl"));
    assert_eq!(errors.len(), 1);
    assert_eq!(errors[0]["kind"], "InvalidReference");

    let literal = dir.path().join("literal.jsonl");
    assert_eq!(code(&run(svgforge(&["score", p(&pairs), "--out", p(&literal), "--semantics", "literal"]))), 1);
    assert!((jsonl(&literal)[2]["match"].as_f64().unwrap() - std::f64::consts::E).abs() < 1e-12);
}

#[test]
fn augment_determinism_and_skips() {
    let dir = tempfile::tempdir().unwrap();
    let records = classify_corpus(dir.path());
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for out in [&a, &b] {
        let o = run(svgforge(&["augment", p(&records), "--out", p(out), "--n-variants", "2", "--seed", "9", "--ops", "recolor"]));
        assert!(code(&o) <= 1, "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let n_in = jsonl(&records).len();
    let produced = jsonl(&a);
    assert_eq!(produced.len() + jsonl(&dir.path().join("a.errors.jsonl")).len(), 2 * n_in);
    for v in &produced {
        let r: DatasetRecord = serde_json::from_value(v.clone()).unwrap();
        assert!(r.augmented_from.is_some());
        assert!(r.self_check().unwrap());
    }

    let single = dir.path().join("single.jsonl");
    let rec = svgforge::pipeline::record_from_svg("one".into(), SQUARE).unwrap();
    svgforge::pipeline::write_jsonl(&single, &[rec]).unwrap();
    let out = dir.path().join("swapped.jsonl");
    let o = run(svgforge(&["augment", p(&single), "--out", p(&out), "--ops", "swap"]));
    assert_eq!(code(&o), 1);
    assert!(jsonl(&out).is_empty());
    assert_eq!(jsonl(&dir.path().join("swapped.errors.jsonl"))[0]["kind"], "TooFewPaths");
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw");
    write(&raw.join("lines.svg"), LINES);
    write(&raw.join("circle.svg"), CIRCLE);
    let norm = dir.path().join("norm");
    assert_eq!(code(&run(svgforge(&["normalize", p(&raw), p(&norm)]))), 0);

    let o = run(svgforge(&["verify", p(&raw), p(&norm)]));
    assert_eq!(code(&o), 0);
    let rows: Vec<Value> = String::from_utf8(o.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let lines = rows.iter().find(|r| r["id"] == "lines").unwrap();
    assert!(lines["worst_path_deviation"].as_f64().unwrap() < 1e-9);

    let o = run(svgforge(&["verify", p(&raw), p(&norm), "--tolerance", "1e-6"]));
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("worst circle"));

    fs::remove_file(norm.join("lines.svg")).unwrap();
    let report = dir.path().join("verify.jsonl");
    let o = run(svgforge(&["verify", p(&raw), p(&norm), "--out", p(&report)]));
    assert_eq!(code(&o), 1);
    assert_eq!(jsonl(&dir.path().join("verify.errors.jsonl")).len(), 1);

    assert_eq!(code(&run(svgforge(&["verify", p(&raw), p(&norm), "--tolerance", "-1"]))), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(svgforge(&["frobnicate"]))), 2);
    assert_eq!(code(&run(svgforge(&["classify", "/nonexistent/dir", "--out", "/tmp/x.jsonl"]))), 2);
    assert_eq!(code(&run(svgforge(&["--help"]))), 0);
}

#[test]
fn config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let records = classify_corpus(dir.path());
    let augment = |name: &str, extra: &[&str], env: Option<&str>| {
        let out = dir.path().join(name);
        let mut args = vec!["augment", p(&records), "--out", p(&out), "--ops", "recolor"];
        args.extend_from_slice(extra);
        let mut cmd = svgforge(&args);
        if let Some(seed) = env {
            cmd.env("SVGFORGE_SEED", seed);
        }
        assert!(code(&run(cmd)) <= 1);
        fs::read(out).unwrap()
    };
    let config = dir.path().join("svgforge.toml");
    fs::write(&config, "seed = 1\nn_variants = 1\n").unwrap();
    let cfg = p(&config);

    let seed1 = augment("s1.jsonl", &["--seed", "1"], None);
    let seed2 = augment("s2.jsonl", &["--seed", "2"], None);
    let seed3 = augment("s3.jsonl", &["--seed", "3"], None);
    assert_ne!(seed1, seed2);
    assert_eq!(augment("file.jsonl", &["--config", cfg], None), seed1);
    assert_eq!(augment("env.jsonl", &["--config", cfg], Some("2")), seed2);
    assert_eq!(augment("flag.jsonl", &["--config", cfg, "--seed", "3"], Some("2")), seed3);

    fs::write(&config, "sede = 1\n").unwrap();
    assert_eq!(code(&run(svgforge(&["stats", p(&records), "--config", cfg]))), 2);
}
