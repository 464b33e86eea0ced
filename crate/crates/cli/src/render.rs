//! Text, CSV and JSON renderings.

use std::fmt::Write as _;

use psi11_core::corpus::ResidualReport;
use psi11_core::number_theory::SquaresRow;
use psi11_core::suite::SCHEMA_VERSION;
use serde_json::{json, Value};

use crate::Fatal;

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn text(reports: &[ResidualReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let _ = write!(
            s,
            "{} {}/{} [{}] residual={}",
            if r.pass { "PASS" } else { "FAIL" },
            r.identity,
            r.instance,
            r.backend,
            r.residual
        );
        if let Some(o) = r.order {
            let _ = write!(s, " order={o}");
        }
        if let Some(e) = &r.certified_error {
            let _ = write!(s, " certified={e}");
        }
        if let Some(t) = &r.tolerance {
            let _ = write!(s, " tol={t}");
        }
        if let Some(w) = &r.wall_time {
            let _ = write!(s, " time={w}s");
        }
        if let Some(o) = &r.outcome {
            let _ = write!(s, " ({o})");
        }
        s.push('\n');
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    let _ = writeln!(s, "{passed}/{} passed", reports.len());
    s
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String, Fatal> {
    let bytes = w.into_inner().map_err(|e| Fatal(e.to_string()))?;
    Ok(String::from_utf8(bytes)?)
}

pub fn reports_csv(reports: &[ResidualReport]) -> Result<String, Fatal> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "identity",
        "instance",
        "backend",
        "parameters",
        "order",
        "tolerance",
        "residual",
        "first_difference",
        "certified_error",
        "wall_time",
        "pass",
        "outcome",
    ])?;
    for r in reports {
        let params = r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
        w.write_record([
            r.identity.clone(),
            r.instance.clone(),
            r.backend.to_string(),
            params,
            opt(&r.order),
            opt(&r.tolerance),
            r.residual.clone(),
            opt(&r.first_difference),
            opt(&r.certified_error),
            opt(&r.wall_time),
            r.pass.to_string(),
            opt(&r.outcome),
        ])?;
    }
    csv_string(w)
}

pub fn squares_csv(s: u32, rows: &[SquaresRow]) -> Result<String, Fatal> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", &format!("r{s}_enumeration"), &format!("r{s}_formula"), &format!("r{s}_generating"), "match"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.enumeration.to_string(),
            opt(&r.formula),
            r.generating_function.to_string(),
            r.matches.to_string(),
        ])?;
    }
    csv_string(w)
}

pub fn squares_json(s: u32, rows: &[SquaresRow]) -> String {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n.to_string(),
                "enumeration": r.enumeration.to_string(),
                "formula": r.formula.map(|f| f.to_string()),
                "generating_function": r.generating_function.to_string(),
                "match": r.matches,
            })
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&json!({ "schema": SCHEMA_VERSION, "s": s.to_string(), "rows": rows }))
        .expect("plain JSON values");
    out.push('\n');
    out
}

pub fn squares_text(s: u32, rows: &[SquaresRow]) -> String {
    let mut out = format!("{:>6} {:>10} {:>10} {:>10}  match\n", "n", "enum", "formula", "gen.fn");
    for r in rows {
        let f = r.formula.map_or("-".to_owned(), |f| f.to_string());
        let _ = writeln!(out, "{:>6} {:>10} {:>10} {:>10}  {}", r.n, r.enumeration, f, r.generating_function, r.matches);
    }
    let bad = rows.iter().filter(|r| !r.matches).count();
    let _ = writeln!(out, "s = {s}: {} rows, {bad} mismatches", rows.len());
    out
}

/// Re-emit a saved report after checking its shape; returns the body and the aggregate verdict.
pub fn resave(text: &str) -> Result<(String, bool), Fatal> {
    let doc: Value = serde_json::from_str(text)?;
    if doc.get("schema") != Some(&json!(SCHEMA_VERSION)) {
        return Err(Fatal(format!("unsupported report schema (expected {SCHEMA_VERSION})")));
    }
    let reports = doc
        .get("reports")
        .and_then(Value::as_array)
        .ok_or_else(|| Fatal("report has no `reports` array".into()))?;
    let mut pass = true;
    for r in reports {
        pass &= r.get("pass").and_then(Value::as_bool).ok_or_else(|| Fatal("report entry without `pass`".into()))?;
    }
    let mut body = serde_json::to_string_pretty(&doc)?;
    body.push('\n');
    Ok((body, pass))
}
