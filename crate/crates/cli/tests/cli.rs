use std::process::Command;

use serde_json::Value;
use young_endo::endoalgebra::{AlgebraDump, AlgebraElement, EndoAlgebra};
use young_endo_cli::execute;

fn run(args: &[&str]) -> young_endo_cli::Outcome {
    execute(std::iter::once("young-endo").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn classify_tensor_both() {
    let v = json(&["classify-tensor", "--n", "5", "--r", "2", "--p", "2", "--both"]);
    assert_eq!(v["generic"], false);
    assert_eq!(v["closed_form"], false);
    assert_eq!(v["agree"], true);
    let v = json(&["classify-tensor", "--n", "5", "--r", "1", "--p", "2", "--criterion", "closed-form"]);
    assert_eq!(v["closed-form"], true);
}

#[test]
fn kostka_prints_a_number() {
    let out = run(&["kostka", "--lambda", "2,1", "--mu", "1,1,1"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "2\n"));
}

#[test]
fn cell_verify_report() {
    let out = run(&["cell", "--n", "2", "--support", "1,1", "--verify"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out
        .stdout
        .lines()
        .any(|l| l == "C1 pass, C2 pass, C3 pass, cells (2):1, (1,1):1"));
    let v = json(&["cell", "--n", "2", "--support", "1,1", "--verify", "--format", "json"]);
    assert_eq!(v["report"]["c3"]["pass"], true);
    assert_eq!(v["cells"], serde_json::json!([["2", 1], ["1,1", 1]]));
}

#[test]
fn classify_verdicts() {
    let v = json(&["classify", "--n", "2", "--support", "1,1", "--p", "2"]);
    assert_eq!(v["quasi_hereditary"], false);
    assert_eq!(v["witness"], "2");
    let v = json(&["classify", "--n", "2", "--support", "1,1; 2", "--p", "2"]);
    assert_eq!(v["quasi_hereditary"], true);
    let v = json(&["classify", "--tensor", "6", "2", "--p", "3"]);
    assert_eq!(v["quasi_hereditary"], false);
}

#[test]
fn pdom_with_oracle() {
    let v = json(&["pdom", "--mu", "5", "--tau", "4,1", "--p", "2", "--oracle"]);
    assert_eq!(v["p_dominates"], true);
    assert_eq!(v["agree"], true);
    assert_eq!(v["witness"]["digits"], serde_json::json!([[0, 1], [0, 0], [1, 0]]));
    let v = json(&["pdom", "--mu", "4", "--tau", "3,1", "--p", "2"]);
    assert_eq!(v["p_dominates"], false);
    assert!(v["witness"].is_null());
}

#[test]
fn partition_algebra_flags_regime() {
    let v = json(&["partition-algebra", "--r", "2", "--n", "5", "--p", "3"]);
    assert_eq!(v["closed_form"], true);
    assert_eq!(v["agree"], true);
    assert_eq!(v["regime"], "empirical: N >= 2r+1");
}

#[test]
fn orbits_counts_classes() {
    let v = json(&["orbits", "--n", "2", "--support", "1,1; 2"]);
    assert_eq!(v["class_count"], 5);
    let v = json(&["orbits", "--n", "3", "--support", "2,1; 3"]);
    assert_eq!(v["class_count"], 5);
}

#[test]
fn exit_codes() {
    let out = run(&["kostka", "--lambda", "2,x", "--mu", "1,1,1"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("--lambda"), "{}", out.stderr);
    let out = run(&["kostka", "--lambda", "2,1", "--mu", "1,1"]);
    assert_eq!(out.code, 1);
    let out = run(&["classify", "--n", "2", "--support", "1,1", "--p", "4"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("--p"));
    let out = run(&["classify-tensor", "--n", "five", "--r", "2", "--p", "2"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("--n"), "{}", out.stderr);
    let out = run(&["construct", "--n", "4", "--support", "1,1,1,1", "--max-points", "10"]);
    assert_eq!(out.code, 2, "{}", out.stderr);
    let out = run(&["cell", "--tensor", "3", "2", "--n", "4"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("--n"));
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn construct_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("alg.json");
    let out = run(&["construct", "--n", "3", "--support", "2,1; 1,1,1", "--output", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let dump: AlgebraDump = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let loaded = EndoAlgebra::from_dump(dump).unwrap();
    let fresh = EndoAlgebra::new(&"2,1; 1,1,1".parse().unwrap()).unwrap();
    assert_eq!(loaded.dim(), fresh.dim());
    for a in 0..fresh.dim() {
        for b in 0..fresh.dim() {
            let (x, y) = (AlgebraElement::basis(a), AlgebraElement::basis(b));
            assert_eq!(loaded.multiply(&x, &y), fresh.multiply(&x, &y));
        }
    }
    let stdout = run(&["construct", "--n", "3", "--support", "2,1; 1,1,1"]).stdout;
    assert_eq!(stdout, std::fs::read_to_string(&path).unwrap());
}

#[test]
fn cell_dump_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("datum.json");
    let out = run(&["cell", "--n", "3", "--support", "2,1", "--dump", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["lambda_plus"], serde_json::json!(["3", "2,1"]));
    assert_eq!(v["cells"][0]["d"].as_array().unwrap().len(), 1);
    assert_eq!(v["omega"], serde_json::json!({"n": 3, "orbit_types": ["2,1", "3"]}));
}

#[test]
fn csv_table_is_stable() {
    let args = ["table", "--family", "tensor", "--p", "3", "--n-max", "9", "--r-max", "4", "--format", "csv"];
    let dir = tempfile::tempdir().unwrap();
    let first = run(&args).stdout;
    std::fs::write(dir.path().join("a.csv"), &first).unwrap();
    let second = run(&args).stdout;
    assert_eq!(std::fs::read(dir.path().join("a.csv")).unwrap(), second.as_bytes());
    let mut lines = first.lines();
    assert_eq!(lines.next(), Some("n,r,p,generic,closed_form,agree"));
    assert_eq!(lines.count(), 36);
    assert!(first.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn binary_respects_thread_setting() {
    let bin = env!("CARGO_BIN_EXE_young-endo");
    let args = ["table", "--family", "tensor", "--p", "2", "--n-max", "8", "--r-max", "3"];
    let many = Command::new(bin).args(args).output().unwrap();
    let one = Command::new(bin).args(args).env("YOUNG_ENDO_THREADS", "0").output().unwrap();
    assert!(many.status.success() && one.status.success());
    assert_eq!(many.stdout, one.stdout);
    let guard = Command::new(bin)
        .args(["cell", "--n", "4", "--support", "1,1,1,1", "--max-points", "5"])
        .output()
        .unwrap();
    assert_eq!(guard.status.code(), Some(2));
}
