use std::process::{Command, Output};

const RIGHT_TREFOIL: &str = "X[4,2,5,1] X[6,4,1,3] X[2,6,3,5]";

fn okh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_okh")).args(args).output().expect("run okh")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn jones_outputs() {
    let o = okh(&["jones", "--pd", "O"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "q^1 + q^-1\n");
    let o = okh(&["jones", "--pd", "X[1,3,2,4] X[3,1,4,2]", "--oracle"]);
    assert_eq!(stdout(&o), "1 + q^-2 + q^-4 + q^-6\noracle: 1 + q^-2 + q^-4 + q^-6 (match)\n");
}

#[test]
fn exit_codes() {
    let o = okh(&["jones", "--pd", "X[1,2,3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("X[1,2,3"));
    assert_eq!(okh(&["jones", "--pd", "X[1,1,2,3]"]).status.code(), Some(4));
    assert_eq!(okh(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(okh(&["jones", "--file", "/nonexistent/file"]).status.code(), Some(1));
}

#[test]
fn homology_tables() {
    let o = okh(&["homology", "--pd", "O"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0].split_whitespace().collect::<Vec<_>>(), ["0", "-1", "Z"]);
    assert_eq!(lines[1].split_whitespace().collect::<Vec<_>>(), ["0", "1", "Z"]);
    let o = okh(&["homology", "--pd", RIGHT_TREFOIL]);
    let text = stdout(&o);
    assert!(text.contains("Z/2"));
    assert!(text.contains("(bracket q^-1 + q^-3 + q^-5 - q^-9, match)"));
    let o = okh(&["homology", "--pd", RIGHT_TREFOIL, "--ring", "lee"]);
    assert!(stdout(&o).contains("rank over Z[1/2]: 2"));
    let o = okh(&["homology", "--pd", "O", "--format", "poincare"]);
    assert_eq!(stdout(&o), "t^0 q^-1 + t^0 q^1\n");
}

#[test]
fn structured_output_is_json_and_deterministic() {
    let a = okh(&["homology", "--pd", RIGHT_TREFOIL, "--format", "structured"]);
    let b = okh(&["homology", "--pd", RIGHT_TREFOIL, "--format", "structured", "--jobs", "1"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v[0]["total_rank"], 4);
    assert_eq!(v[0]["homology"]["ring"], "graded");
    let d: serde_json::Value = serde_json::from_slice(&okh(&["dump-complex", "--pd", "X[1,1,2,2]", "--format", "structured"]).stdout).unwrap();
    assert_eq!(d[0]["heights"].as_array().unwrap().len(), 2);
}

#[test]
fn lee_classes() {
    let o = okh(&["lee", "--pd", "X[1,3,2,4] X[3,1,4,2]"]);
    let text = stdout(&o);
    assert!(text.contains("rank over Z[1/2]: 4"));
    assert_eq!(text.matches(": cycle").count(), 4);
    assert!(text.contains("classes independent: true, span over Z[1/2]: true"));
}

#[test]
fn verify_corpus_and_moves() {
    let corpus = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/corpus.json");
    let o = okh(&["verify", "--file", corpus]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let o = okh(&["verify", "--pd", "O", "--moves", "25", "--seed", "3"]);
    assert!(o.status.success());
}

#[test]
fn verify_reports_corrupted_signs() {
    let o = okh(&["verify", "--pd", RIGHT_TREFOIL, "--fault", "drop-twist-signs"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("FAIL diagram: d^2=0"));
}
