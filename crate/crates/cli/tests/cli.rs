use std::process::{Command, Output};

use serde_json::Value;

fn psi11(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psi11")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn formal_psi11_order_30() {
    let o = psi11(&["verify", "--identity", "1psi1", "--backend", "formal", "--order", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("PASS 1psi1/canonical [formal] residual=0 order=30"), "{s}");
    assert!(s.ends_with("1/1 passed\n"));
}

#[test]
fn all_numeric_pass() {
    let o = psi11(&["verify", "--all", "--backend", "numeric", "--format", "json", "--no-timing"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let reports = doc["reports"].as_array().unwrap();
    assert!(reports.len() > 20);
    for r in reports {
        assert_eq!(r["backend"], "numeric");
        assert_eq!(r["pass"], true, "{r}");
        assert!(r["residual"].is_string());
    }
}

#[test]
fn unknown_identity_is_config_error() {
    let o = psi11(&["verify", "--identity", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown identity"));
}

#[test]
fn invalid_config_values() {
    for args in [
        &["verify", "--identity", "1psi1", "--order", "0"][..],
        &["verify", "--identity", "1psi1", "--precision", "32"],
        &["verify", "--identity", "1psi1", "--tolerance", "-1"],
        &["verify", "--identity", "1psi1", "--backend", "symbolic"],
    ] {
        assert_eq!(psi11(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failing_residual_exits_one() {
    // 64 bits cannot certify 1e-60
    let o = psi11(&["verify", "--identity", "triple-product", "--backend", "numeric", "--precision", "64", "--tolerance", "1e-60"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn squares_four_to_ten() {
    let o = psi11(&["squares", "-s", "4", "--max-n", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[0], "n,r4_enumeration,r4_formula,r4_generating,match");
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
    assert_eq!(lines[10], "9,104,104,104,true");
}

#[test]
fn squares_single_row_and_unsupported() {
    let o = psi11(&["squares", "-s", "2", "--max-n", "0"]);
    assert_eq!(stdout(&o), "n,r2_enumeration,r2_formula,r2_generating,match\n0,1,1,1,true\n");
    let o = psi11(&["squares", "-s", "6", "--max-n", "5", "--format", "json"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["rows"][1]["enumeration"], "12");
    assert!(doc["rows"][1]["formula"].is_null());
    assert_eq!(psi11(&["squares", "-s", "5"]).status.code(), Some(2));
}

#[test]
fn report_empty_selection() {
    let o = psi11(&["report"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\n  \"schema\": 1,\n  \"reports\": []\n}\n");
}

#[test]
fn report_bad_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("r.json");
    let o = psi11(&["report", "--identity", "1psi1", "--backend", "formal", "--order", "5", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_roundtrip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let args = |p: &str| {
        vec!["report", "--identity", "kronecker", "--identity", "triple-product", "--order", "12", "--seed", "7", "--no-timing", "--out"]
            .into_iter()
            .map(str::to_owned)
            .chain([p.to_owned()])
            .collect::<Vec<_>>()
    };
    let p1 = dir.path().join("a.json");
    let p2 = dir.path().join("b.json");
    for p in [&p1, &p2] {
        let a = args(p.to_str().unwrap());
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        assert_eq!(psi11(&a).status.code(), Some(0));
    }
    let a = std::fs::read_to_string(&p1).unwrap();
    assert_eq!(a, std::fs::read_to_string(&p2).unwrap());

    let o = psi11(&["report", "--from", p1.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), a);

    let doc: Value = serde_json::from_str(&a).unwrap();
    let first = &doc["reports"][0];
    for key in ["identity", "backend", "parameters", "residual", "certified_error", "wall_time", "pass"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    assert_eq!(first["order"], "12");
}

#[test]
fn csv_quoting() {
    let o = psi11(&["verify", "--identity", "new-multiple-1psi1", "--backend", "formal", "--order", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let mut rdr = csv::Reader::from_reader(s.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.len() == 12));
    // the recorded engine outcome contains commas and parentheses
    assert!(rows[1][11].contains("t = tau"));
}

#[test]
fn noncommutative_dimension_flag() {
    let o = psi11(&["verify", "--identity", "noncommutative-1psi1", "-d", "3", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("noncommutative-1psi1/d3-seed5"));
    assert!(s.ends_with("1/1 passed\n"), "{s}");
}
