use std::process::{Command, Output};

use serde_json::Value;

fn ffdioph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffdioph")).args(args).env_remove("FFDIOPH_THREADS").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = ffdioph(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn temp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("ffdioph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn thm1_example() {
    let doc = json(&["dimension", "thm1", "--m", "1", "--n", "1", "--vS", "1", "--lambda", "3"]);
    assert_eq!(doc["result"]["regime"], "DIMENSION");
    assert_eq!(doc["result"]["dim"], "1/2");
}

#[test]
fn full_measure_verdict() {
    let doc = json(&["dimension", "thm1", "--m", "2", "--n", "1", "--vS", "2", "--lambda", "1"]);
    assert_eq!(doc["result"]["regime"], "FULL_MEASURE");
    assert_eq!(doc["result"]["dim"], "2");
}

#[test]
fn exponent_of_all_pairs() {
    let doc = json(&["exponents", "vS", "--family", "all", "--m", "2", "--Nmax", "10"]);
    let v = doc["result"]["estimate"].as_f64().unwrap();
    assert!((v - 2.0).abs() < 0.1, "{v}");
    assert_eq!(doc["result"]["exact"], "2");
}

#[test]
fn verification_examples() {
    let doc = json(&["verify", "1D-measure", "--k", "2", "--degmax", "4"]);
    assert_eq!(doc["result"]["passed"], true);
    assert_eq!(doc["result"]["failures"], 0);
    let doc = json(&["verify", "independence", "--m", "2", "--degmax", "2"]);
    assert_eq!(doc["result"]["passed"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(ffdioph(&["verify", "unknown-lemma"]).status.code(), Some(2));
    assert_eq!(ffdioph(&["dimension", "thm1", "--m", "1"]).status.code(), Some(2));
    assert_eq!(ffdioph(&[]).status.code(), Some(2));
    assert_eq!(ffdioph(&["--threads", "0", "dimension", "thm2", "--m", "1", "--n", "1", "--eta", "1"]).status.code(), Some(2));

    let bad = temp("bad.json");
    std::fs::write(&bad, "{\"field\": ").unwrap();
    let out = ffdioph(&["--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid config"));

    let unknown = temp("unknown.json");
    std::fs::write(&unknown, r#"{"task": {"verify": {"lemma": "phi"}}, "colour": 1}"#).unwrap();
    assert_eq!(ffdioph(&["--config", unknown.to_str().unwrap()]).status.code(), Some(2));
    let both = ffdioph(&["--config", unknown.to_str().unwrap(), "verify", "phi"]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn config_echo_reproduces() {
    let first = ffdioph(&["stochastic", "moments", "--Nt", "3", "--samples", "2000", "--seed", "11"]);
    assert_eq!(first.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&first.stdout).unwrap();
    let cfg = temp("echo.json");
    std::fs::write(&cfg, serde_json::to_vec(&doc["config"]).unwrap()).unwrap();
    let second = ffdioph(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn thread_count_from_environment() {
    let args = ["boxcount", "--psi", "power:2", "--T", "9"];
    let a = Command::new(env!("CARGO_BIN_EXE_ffdioph")).args(args).env("FFDIOPH_THREADS", "1").output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_ffdioph")).args(args).env("FFDIOPH_THREADS", "3").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_output() {
    let out = ffdioph(&["boxcount", "--psi", "power:3", "--T", "6", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "depth,survivors,estimate,prediction");
    assert_eq!(lines.len(), 7);
    assert!(lines[6].ends_with(",1/2"));

    let out = ffdioph(&["measure", "--kind", "b", "--q", "1,1;0,1", "--r", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("key,value\nmeasure,1/2^2\n"), "{text}");
}

#[test]
fn output_file() {
    let path = temp("thm2.json");
    let out = ffdioph(&["dimension", "thm2", "--m", "2", "--n", "1", "--eta", "3/4", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["result"]["dim"], "7/4");
}
