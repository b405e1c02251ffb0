use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn gpb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples").join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn two_letter_example_solves() {
    let path = example("two_letters.json");
    let out = gpb(&["solve", "--instance", path.to_str().unwrap(), "--oracle-check"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("M = -1\n"), "{text}");
    assert!(text.contains("labeling = ab\n"), "{text}");
    assert!(text.contains("(match)"), "{text}");
}

#[test]
fn hairpin_algorithms_agree() {
    let path = example("hairpin.json");
    let path = path.to_str().unwrap();
    let mut values = Vec::new();
    for algorithm in ["general", "interaction"] {
        let out = gpb(&[
            "solve",
            "--instance",
            path,
            "--algorithm",
            algorithm,
            "--oracle-check",
            "--output",
            "machine-readable",
        ]);
        assert!(out.status.success(), "{algorithm}: {}", stderr(&out));
        let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(report["oracle"]["matches"], true);
        values.push(report["value"].as_f64().unwrap());
    }
    assert!((values[0] - values[1]).abs() < 1e-9, "{values:?}");
}

#[test]
fn zero_weight_instance_has_zero_minimum() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "zero.json",
        r#"{"n": 5, "alphabet": ["a", "b"],
            "grammar": {"type": "cnf", "nonterminals": ["S"], "start": "S",
                        "rules": [{"lhs": "S", "rhs": ["S", "S"]},
                                  {"lhs": "S", "rhs": ["a"]},
                                  {"lhs": "S", "rhs": ["b"]}]}}"#,
    );
    let out = gpb(&["solve", "--instance", &path, "--oracle-check"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("M = 0\n"), "{}", stdout(&out));
}

#[test]
fn malformed_file_exits_two_with_location() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "bad.json", "{\"n\": 3,\n \"alphabet\": [\"a\",\n}");
    let out = gpb(&["solve", "--instance", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn unknown_field_exits_two() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "extra.json",
        r#"{"n": 1, "alphabet": ["a"], "colour": 1,
            "grammar": {"type": "interaction", "depth": 1, "pairs": []}}"#,
    );
    let out = gpb(&["solve", "--instance", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("colour"), "{}", stderr(&out));
}

#[test]
fn missing_file_exits_two() {
    let out = gpb(&["solve", "--instance", "/nonexistent/instance.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_oracle_check_exits_three() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "big.json",
        r#"{"n": 20, "alphabet": ["a", "b"],
            "grammar": {"type": "interaction", "depth": 1, "pairs": []}}"#,
    );
    let out = gpb(&["solve", "--instance", &path, "--algorithm", "interaction", "--oracle-check"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    let plain = gpb(&["solve", "--instance", &path, "--algorithm", "interaction"]);
    assert!(plain.status.success(), "{}", stderr(&plain));
}

#[test]
fn cnf_grammar_rejected_by_interaction_algorithm() {
    let path = example("two_letters.json");
    let out = gpb(&["solve", "--instance", path.to_str().unwrap(), "--algorithm", "d1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_is_deterministic() {
    let a = gpb(&["gen", "--n", "30", "--C", "1", "--seed", "4"]);
    let b = gpb(&["gen", "--n", "30", "--C", "1", "--seed", "4"]);
    let c = gpb(&["gen", "--n", "30", "--C", "1", "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn generated_instance_passes_oracle_check() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("synthetic.json");
    let path = path.to_str().unwrap();
    let out = gpb(&["gen", "--n", "7", "--C", "1", "--seed", "1", "--output", path]);
    assert!(out.status.success(), "{}", stderr(&out));
    for algorithm in ["general", "interaction"] {
        let out = gpb(&["solve", "--instance", path, "--algorithm", algorithm, "--oracle-check"]);
        assert!(out.status.success(), "{algorithm}: {}{}", stdout(&out), stderr(&out));
        assert!(stdout(&out).contains("(match)"));
    }
    let text = fs::read_to_string(path).unwrap();
    let file = gpb_cli::InstanceFile::parse(&text).unwrap();
    assert_eq!(file.to_json() + "\n", text);
}

#[test]
fn machine_readable_output_is_stable() {
    let path = example("hairpin.json");
    let args = [
        "solve",
        "--instance",
        path.to_str().unwrap(),
        "--algorithm",
        "interaction",
        "--output",
        "machine-readable",
    ];
    let first = gpb(&args);
    let second = gpb(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let report: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(report["algorithm"], "interaction");
    assert_eq!(report["objective"], "min");
    assert!(report["labeling"].is_string());
}

#[test]
fn bench_writes_csv_and_fit() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = gpb(&[
        "bench",
        "--n-min",
        "10",
        "--n-max",
        "30",
        "--n-step",
        "10",
        "--C-list",
        "0,1",
        "--fit-range",
        "10,30",
        "--backend",
        "both",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("algorithm,backend,n,C,seed,wall_seconds"));
    assert_eq!(lines.count(), 12);
    assert!(stderr(&out).contains("fit useful-edge: exponent"));
}
