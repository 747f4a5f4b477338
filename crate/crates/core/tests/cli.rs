use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamming-spectra")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn analyze_dictator_and_constant() {
    let dir = tempfile::tempdir().unwrap();
    let dictator = write(dir.path(), "d.txt", "3 2 pm1\n1 1 1\n-1 -1 -1\n-1 -1 -1\n");
    for extra in [&[][..], &["--exact"][..]] {
        let mut args = vec!["analyze", dictator.as_str()];
        args.extend(extra);
        let r = json(&bin(&args));
        assert_eq!(r["schema_version"], "1");
        assert_eq!(r["results"]["spectrum"]["degree"], 1);
        assert_eq!(r["results"]["relevant"], serde_json::json!([1]));
        assert_eq!(r["results"]["bound"]["verdict"], "pass");
        assert_eq!(r["results"]["nu"]["edges"], 6);
        assert!((r["results"]["nu"]["via_fourier"].as_f64().unwrap() - 6.0).abs() < 1e-9);
    }
    let constant = write(dir.path(), "c.txt", "3 2 01\n0 0 0 0 0 0 0 0 0\n");
    let r = json(&bin(&["analyze", &constant, "--exact"]));
    assert_eq!(r["results"]["spectrum"]["degree"], 0);
    assert_eq!(r["results"]["bound"]["verdict"], "not-applicable");
    assert_eq!(r["results"]["bound"]["relevant_count"], 0);
}

#[test]
fn analyze_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "3 pm1\n1 1 1\n");
    let out = bin(&["analyze", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    let cplx = write(dir.path(), "z.txt", "3 1 cplx\n1 0 0 1 -1 0\n");
    assert_eq!(bin(&["analyze", &cplx, "--exact"]).status.code(), Some(1));
    let r = json(&bin(&["analyze", &cplx, "--eps", "1e-12"]));
    assert_eq!(r["results"]["bound"]["skipped"].as_str().map(|s| !s.is_empty()), Some(true));
    assert_eq!(bin(&["analyze", "/nonexistent/table.txt"]).status.code(), Some(1));
}

#[test]
fn verify_partition_cases() {
    let dir = tempfile::tempdir().unwrap();
    let split = write(dir.path(), "s.txt", "3 2 2\n1 1 1\n2 2 2\n2 2 2\n");
    let r = json(&bin(&["verify-partition", &split]));
    assert_eq!(r["results"]["quotient"], serde_json::json!([[2, 2], [1, 3]]));
    assert_eq!(r["results"]["degree"], 1);
    assert_eq!(r["results"]["theta0"], 4);
    assert_eq!(r["results"]["theta1"], 1);
    assert_eq!(r["results"]["indicator_spectrum"]["weights"], serde_json::json!([0, 1]));
    assert_eq!(r["results"]["audit"]["verdict"], "pass");

    let single = write(dir.path(), "v.txt", "3 2 2\n1 1 1\n1 2 1\n1 1 1\n");
    let out = bin(&["verify-partition", &single]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("not equitable") && msg.contains("[0, 1]"), "{msg}");

    let three = write(dir.path(), "t.txt", "3 2 3\n1 1 1\n2 2 2\n3 3 3\n");
    let r = json(&bin(&["verify-partition", &three]));
    assert_eq!(r["results"]["quotient"], serde_json::json!([[2, 1, 1], [1, 2, 1], [1, 1, 2]]));
    assert!(r["results"]["audit"]["skipped"].is_string());
}

#[test]
fn bounds_grid_and_cell() {
    let r = json(&bin(&["bounds", "--q-range", "3", "--d-range", "2", "--d-prime", "2"]));
    let cell = &r["results"]["cells"][0]["general"];
    assert_eq!((cell["bound"]["num"].as_str(), cell["bound"]["den"].as_str()), (Some("81"), Some("16")));
    assert_eq!(cell["winner"], "main");

    let r = json(&bin(&["bounds", "--q-range", "3..7", "--d-range", "1..10"]));
    for row in r["results"]["rows"].as_array().unwrap() {
        assert_eq!(row["degree_case_winner"], "main", "{row}");
        assert_eq!(row["diagonal_case_winner"], "main");
    }
    let reparsed: Value = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(reparsed, r);

    let out = bin(&["bounds", "--q-range", "3..5", "--d-range", "1..3", "--format", "table"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 1 + 9);

    assert_eq!(bin(&["bounds", "--q-range", "2..4"]).status.code(), Some(1));
}

#[test]
fn search_commands_and_witness_round_trip() {
    let r = json(&bin(&["search", "audit", "2", "3"]));
    assert_eq!(r["results"]["count_visited"], 512);
    assert_eq!(r["results"]["fail"], 0);

    let r = json(&bin(&["search", "minsupport", "1", "1", "2", "3"]));
    assert_eq!(r["results"]["sharp"], true);
    assert_eq!(r["results"]["minimum_found"], 4);
    let witness = r["results"]["witness"]["table"].as_str().unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "w.txt", witness);
    let a = json(&bin(&["analyze", &path, "--exact"]));
    assert_eq!(a["results"]["spectrum"]["weights"], serde_json::json!([1]));

    let audit = json(&bin(&["search", "audit", "2", "4", "--symmetry"]));
    let worst = audit["results"]["worst_case"]["table"].as_str().unwrap();
    let path = write(dir.path(), "worst.txt", worst);
    let a = json(&bin(&["analyze", &path, "--exact"]));
    assert_eq!(a["results"]["bound"]["relevant_count"], audit["results"]["worst_case"]["achieved"]);
    assert_eq!(a["results"]["bound"]["verdict"], "pass");

    assert_eq!(bin(&["search", "audit", "3", "3"]).status.code(), Some(1));
    assert_eq!(bin(&["search", "minsupport", "2", "1", "3", "3"]).status.code(), Some(1));
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let runs: [&[&str]; 3] = [
        &["search", "audit", "2", "3"],
        &["search", "audit", "3", "3", "--samples", "5000", "--seed", "11"],
        &["search", "minsupport", "1", "1", "2", "4"],
    ];
    for args in runs {
        let one = without_timing(json(&bin(&[&["--threads", "1"][..], args].concat())));
        let eight = without_timing(json(&bin(&[&["--threads", "8"][..], args].concat())));
        assert_eq!(one.to_string(), eight.to_string());
    }
}
