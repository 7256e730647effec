use std::path::Path;
use std::process::{Command, Output};

fn varexp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varexp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn norm_of_unit_interval_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, "{}").unwrap();
    let json = dir.path().join("n.json");
    let o = varexp(&[
        "norm",
        "--config",
        cfg.to_str().unwrap(),
        "--f",
        "chi01",
        "--p",
        "const2",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = read_json(&json);
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["tol"].as_f64(), Some(1e-10));
    assert!(stdout(&o).contains(": 1.0"));
}

#[test]
fn counterexample_slope_is_one_half() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = varexp(&["verify", "--statement", "prop3.1", "--p0", "2", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("fit=0.500000"));
    let v = read_json(&json);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 1);
    let r = &reports[0];
    assert_eq!(r["statement_id"], "prop3.1");
    assert!((r["fitted_exponent"].as_f64().unwrap() - 0.5).abs() < 0.05);
    let mut keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["empirical_constant", "fitted_exponent", "notes", "pass", "statement_id", "witnesses"]);
}

#[test]
fn unknown_statement_is_usage_error() {
    let o = varexp(&["verify", "--statement", "nosuch"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--statement"));
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(varexp(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(varexp(&["verify"]).status.code(), Some(1));
    assert_eq!(varexp(&["norm", "--f", "chi01", "--p", "const7"]).status.code(), Some(1));
    assert_eq!(varexp(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"functions": {"f": {"kind": "nope"}}}"#, "functions.f.kind"),
        (r#"{"grids": {"radius": [1.0, -2.0]}}"#, "grids.radius[1]"),
        (r#"{"seed": 1, "colour": "red"}"#, "colour"),
        ("{not json", "<root>"),
    ];
    for (i, (text, field)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("bad{i}.json"));
        std::fs::write(&path, text).unwrap();
        let o = varexp(&["--config", path.to_str().unwrap(), "norm", "--f", "chi01"]);
        assert_eq!(o.status.code(), Some(1), "{text}");
        assert!(stderr(&o).contains(field), "{text}: {}", stderr(&o));
    }
}

#[test]
fn failed_check_exits_two() {
    // a zero slope tolerance makes the bounded-trend criterion unsatisfiable
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("strict.json");
    std::fs::write(
        &path,
        r#"{"tolerances": {"statements": {"prop3.1": {"abs_tol": 1e-9, "rel_tol": 1e-6, "slope_tol": 0.0}}}}"#,
    )
    .unwrap();
    let o = varexp(&["--config", path.to_str().unwrap(), "verify", "--statement", "prop3.1"]);
    assert_eq!(o.status.code(), Some(2), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn tol_override_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = varexp(&["verify", "--statement", "lemma2.3", "--tol", "1e-7", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = read_json(&json);
    assert!(v[0]["notes"].as_str().unwrap().contains("abs=1e-7"));

    let json = dir.path().join("c.json");
    let o = varexp(&["cbmo", "--f", "sign", "--tol", "1e-8", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(read_json(&json)["tol"].as_f64(), Some(1e-8));
    assert_eq!(varexp(&["norm", "--f", "chi01", "--tol", "-1"]).status.code(), Some(1));
}

#[test]
fn cbmo_csv_breakdown() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let o = varexp(&["cbmo", "--f", "sign", "--rule", "inf", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("scale,value"));
    // default grid 2^-10 ..= 2^20
    assert_eq!(lines.count(), 31);
}

#[test]
fn herz_and_operators() {
    let o = varexp(&["herz", "--f", "ring0", "--q", "2", "--k-min", "-5", "--k-max", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains(": 0.99999999"));

    // [sign, H](χ[0,1]) at x = -1: sign(-1)·1 - 1 = -2
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("op.json");
    let o = varexp(&[
        "op",
        "--kind",
        "commutator-hardy",
        "--f",
        "chi01",
        "--b",
        "sign",
        "--x",
        "-1,2",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = read_json(&json);
    assert!((v["samples"][0]["value"].as_f64().unwrap() + 2.0).abs() < 1e-9);
    assert_eq!(varexp(&["op", "--kind", "commutator-hardy", "--f", "chi01", "--x", "1"]).status.code(), Some(1));
    assert_eq!(varexp(&["op", "--kind", "maximal", "--f", "chi01", "--x", "0.5"]).status.code(), Some(0));
}

#[test]
fn report_round_trip_requires_full_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("partial.json");
    let o = varexp(&["verify", "--statement", "lemma2.3", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = varexp(&["report", "--input", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing"));
}
