use std::path::Path;
use std::process::{Command, Output};

use cwmix_cli::DirectionsFile;
use serde_json::Value;

fn cwmix(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cwmix"))
        .args(args)
        .current_dir(dir)
        .env_remove("CWMIX_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn required_lines_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = cwmix(dir.path(), &["required-lines", "--dim", "2", "--mixture-size", "2"]);
    assert_eq!((code(&out), out.stdout.as_slice()), (0, b"7\n".as_slice()));
    let out = cwmix(dir.path(), &["required-lines", "--dim", "2", "--mixture-size", "1"]);
    assert_eq!(out.stdout, b"3\n");
    let out = cwmix(dir.path(), &["required-lines", "--dim", "0", "--mixture-size", "2"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension"));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&cwmix(dir.path(), &["frobnicate"])), 1);
    assert_eq!(code(&cwmix(dir.path(), &["gen-directions", "--dim", "2"])), 1);
    assert_eq!(code(&cwmix(dir.path(), &["--help"])), 0);
}

#[test]
fn gen_directions_is_certified_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let args = ["gen-directions", "--dim", "2", "--mixture-size", "2", "--seed", "7", "--out"];
    let a = cwmix(p, &[&args[..], &["a.json"]].concat());
    let b = cwmix(p, &[&args[..], &["b.json"]].concat());
    assert_eq!((code(&a), code(&b)), (0, 0));
    let text = std::fs::read_to_string(p.join("a.json")).unwrap();
    assert_eq!(text, std::fs::read_to_string(p.join("b.json")).unwrap());
    let file: DirectionsFile = serde_json::from_str(&text).unwrap();
    assert_eq!(file.vectors.len(), 7);
    let cert = file.certification.unwrap();
    assert_eq!(cert.is_strong, Some(true));
    assert_eq!(cert.subsets_checked, 35);

    let out = cwmix(p, &["gen-directions", "--dim", "2", "--count", "2"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn seed_environment_override() {
    let dir = tempfile::tempdir().unwrap();
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_cwmix"));
        cmd.args(["gen-directions", "--dim", "2", "--count", "4"]).current_dir(dir.path());
        cmd.env_remove("CWMIX_SEED");
        if let Some(v) = env {
            cmd.env("CWMIX_SEED", v);
        }
        if let Some(v) = flag {
            cmd.args(["--seed", v]);
        }
        cmd.output().unwrap().stdout
    };
    assert_eq!(run(Some("5"), None), run(None, Some("5")));
    assert_eq!(run(Some("9"), Some("5")), run(None, Some("5")));
    assert_ne!(run(None, None), run(None, Some("5")));
}

#[test]
fn check_directions_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    write(p, "m2.json", r#"{"dim": 2, "vectors": [[1, 0], [0, 1], [1, 1], [1, -1]]}"#);
    let out = cwmix(p, &["check-directions", "m2.json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["is_strong"], Value::Bool(true));

    write(p, "bad.json", r#"{"dim": 2, "vectors": [[1, 0], [2, 0], [0.3, 0.7], [1, 1]]}"#);
    let out = cwmix(p, &["check-directions", "bad.json"]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["witness_bad_subset"], serde_json::json!([0, 1, 2]));

    cwmix(p, &["gen-directions", "--dim", "3", "--count", "30", "--seed", "2", "--out", "big.json"]);
    let out = cwmix(p, &["check-directions", "big.json", "--mode", "randomized", "--samples", "200"]);
    assert_eq!(code(&out), 4);
    let report = json(&out);
    assert_eq!(report["is_strong"], Value::Null);
    assert_eq!(report["subsets_checked"], 200);

    write(p, "zero.json", r#"{"dim": 2, "vectors": [[0, 0], [1, 0]]}"#);
    assert_eq!(code(&cwmix(p, &["check-directions", "zero.json"])), 1);
}

#[test]
fn project_command() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(code(&cwmix(p, &["counterexample", "--which", "m2", "--out-prefix", ""])), 0);
    let out = cwmix(p, &["project", "--mixture", "P.json", "--direction", "1,0"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let vars: Vec<f64> = v["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["scale"].as_f64().unwrap().powi(2))
        .collect();
    assert!((vars[0] - 2.0).abs() < 1e-15 && (vars[1] - 1.0).abs() < 1e-15);

    let scaled = cwmix(p, &["project", "--mixture", "P.json", "--direction", "2,0"]);
    assert_eq!(scaled.stdout, out.stdout);
    let flipped = cwmix(p, &["project", "--mixture", "P.json", "--direction", "-1,0"]);
    assert_eq!(flipped.stdout, out.stdout);
    assert_eq!(code(&cwmix(p, &["project", "--mixture", "P.json", "--direction", "0,0"])), 1);
    assert_eq!(code(&cwmix(p, &["project", "--mixture", "P.json", "--direction", "1,x"])), 1);
}

#[test]
fn compare_command() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    cwmix(p, &["counterexample", "--which", "m2", "--out-prefix", "m2_"]);
    let out = cwmix(p, &["compare", "--p", "m2_P.json", "--q", "m2_Q.json", "--directions", "m2_S.json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["verdict"], "equal");
    assert!(v["cardinality_warning"].is_string());

    cwmix(p, &["gen-directions", "--dim", "2", "--mixture-size", "2", "--seed", "3", "--out", "s.json"]);
    let out = cwmix(p, &["compare", "--p", "m2_P.json", "--q", "m2_Q.json", "--directions", "s.json"]);
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert_eq!(v["verdict"], "distinct");
    assert!(v["witness_direction"].is_array());

    let out = cwmix(p, &["compare", "--p", "m2_P.json", "--q", "m2_P.json", "--directions", "s.json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["cardinality_warning"], Value::Null);

    write(p, "t.json", r#"{"family": "student_t", "dim": 2, "components": [
        {"weight": 1, "mean": [0, 0], "cov": [[1, 0], [0, 1]], "dof": 3}]}"#);
    assert_eq!(code(&cwmix(p, &["compare", "--p", "m2_P.json", "--q", "t.json", "--directions", "s.json"])), 1);
    assert_eq!(code(&cwmix(p, &["compare", "--p", "m2_P.json", "--q", "missing.json", "--directions", "s.json"])), 1);
}

#[test]
fn invalid_mixture_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    cwmix(p, &["counterexample", "--which", "m2", "--out-prefix", ""]);
    let cases = [
        r#"{"family": "gaussian", "dim": 2, "components": [{"weight": 1, "mean": [0, 0], "cov": [[1, 2], [2, 1]]}]}"#,
        r#"{"family": "gaussian", "dim": 2, "components": [{"weight": 1, "mean": [0, 0], "cov": [[1, 0.5], [0.4, 1]]}]}"#,
        r#"{"family": "gaussian", "dim": 2, "components": [{"weight": 0.7, "mean": [0, 0], "cov": [[1, 0], [0, 1]]}]}"#,
        r#"{"family": "student_t", "dim": 2, "components": [{"weight": 1, "mean": [0, 0], "cov": [[1, 0], [0, 1]]}]}"#,
        r#"{"family": "gaussian", "dim": 2, "components": []}"#,
        r#"not json"#,
    ];
    for (i, text) in cases.iter().enumerate() {
        write(p, "bad.json", text);
        let out = cwmix(p, &["compare", "--p", "bad.json", "--q", "P.json", "--directions", "S.json"]);
        assert_eq!(code(&out), 1, "case {i}");
        assert!(out.stderr.starts_with(b"error: "), "case {i}");
    }
}

#[test]
fn counterexample_command() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let out = cwmix(p, &["counterexample", "--which", "m2", "--out-prefix", "m2_"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["pass"], Value::Bool(true));
    for f in ["m2_P.json", "m2_Q.json", "m2_S.json"] {
        assert!(p.join(f).exists());
    }

    let out = cwmix(p, &["counterexample", "--which", "polygon", "--m", "4", "--out-prefix", "oct_"]);
    assert_eq!(code(&out), 0);
    let s: DirectionsFile = serde_json::from_slice(&std::fs::read(p.join("oct_S.json")).unwrap()).unwrap();
    assert_eq!(s.vectors.len(), 4);
    let q: cwmix_cli::MixtureFile = serde_json::from_slice(&std::fs::read(p.join("oct_Q.json")).unwrap()).unwrap();
    assert_eq!(q.components.len(), 4);

    assert_eq!(code(&cwmix(p, &["counterexample", "--which", "polygon", "--m", "1", "--out-prefix", "x_"])), 1);
}
