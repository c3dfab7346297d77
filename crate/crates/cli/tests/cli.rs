use std::path::Path;
use std::process::{Command, Output};

fn sts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sts")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn record(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn build_f4_writes_a_14_dimensional_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f4.json");
    let o = sts(&["build", "f4", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = record(&out);
    assert_eq!(v["label"], "f4");
    assert_eq!(v["dim"], 14);
    assert_eq!(v["summary"]["dim_inder"], 21);
    assert_eq!(v["summary"]["envelope_signature"], 4);
    assert_eq!(v["summary"]["passed"], true);
}

#[test]
fn parametric_builds_have_expected_dimension() {
    let o = sts(&["build", "symplectic", "--n", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim"], 4);
    assert_eq!(v["params"]["n"], 2);

    let o = sts(&["build", "unitarian", "--p", "2", "--q", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim"], 6);
    assert_eq!(v["grading"]["deg1"].as_array().unwrap().len(), 3);
}

#[test]
fn build_output_is_byte_stable() {
    let a = sts(&["build", "quaternionic", "--n", "2"]);
    let b = sts(&["build", "quaternionic", "--n", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_g2_exhaustive_passes() {
    let o = sts(&["verify", "g2", "--mode", "exhaustive"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("mode:       exhaustive"));
    assert!(s.ends_with("result: PASS\n"));
}

#[test]
fn verify_e8split_sampled_is_reproducible() {
    let a = sts(&["verify", "e8split", "--mode", "sampled", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let b = sts(&["verify", "e8split", "--mode", "sampled", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("seed 7, 100000 samples"));
}

#[test]
fn verify_reads_records_and_rejects_mutations() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("sp.json");
    assert!(sts(&["build", "symplectic", "--n", "2", "--out", good.to_str().unwrap()]).status.success());
    let o = sts(&["verify", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // change the value of the first product entry
    let mut v = record(&good);
    let entry = &mut v["trip"][0];
    let old = entry[4].as_str().unwrap().to_string();
    entry[4] = serde_json::Value::String(if old == "1" { "2".into() } else { "1".into() });
    let bad = dir.path().join("mutated.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let o = sts(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("first failure: axiom"), "{s}");
    assert!(s.contains("basis triple"), "{s}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(sts(&["build", "e9"]).status.code(), Some(2));
    assert_eq!(sts(&["build", "symplectic"]).status.code(), Some(2));
    assert_eq!(sts(&["build", "e6nonsplit", "--p", "4"]).status.code(), Some(2));
    assert_eq!(sts(&["verify", "/nonexistent/record.json"]).status.code(), Some(2));
    assert_eq!(sts(&["frobnicate"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_sts")).args(["verify", "g2"]).env("STS_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_cap_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_sts")).args(["verify", "f4"]).env("STS_THREADS", "1").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn table_matches_every_row() {
    let o = sts(&["table"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().filter(|l| l.ends_with("MATCH") && !l.ends_with("MISMATCH")).count(), 15);
    let so_star = s.lines().find(|l| l.starts_with("e7sostar")).unwrap();
    assert!(so_star.contains("-5/-5"));
    let e62 = s.lines().find(|l| l.starts_with("e6nonsplit(p=3)")).unwrap();
    assert!(e62.contains("2/2"));
    let g2 = s.lines().find(|l| l.starts_with("g2")).unwrap();
    assert!(g2.contains("2/2"));
}
