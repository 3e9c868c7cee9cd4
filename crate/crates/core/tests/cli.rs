use std::process::{Command, Output};

fn zetaphi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetaphi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn s_eval_prints_header_and_row() {
    let o = zetaphi(&["s-eval", "--a", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a,value,abs_err,route,work");
    assert!(lines[1].starts_with("1,0.130330700754,"));
    assert!(lines[1].contains(",Series,"));
}

#[test]
fn fraction_argument_uses_exact_rational() {
    let o = zetaphi(&[
        "s-eval", "--a", "1/3", "--route", "rational", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["route"], "Rational");
    assert!((v["value"].as_f64().unwrap() - 0.015_124_521_099_530_16).abs() < 1e-13);
}

#[test]
fn usage_errors_exit_two_on_stderr() {
    for args in [
        vec!["s-eval", "--a", "-2"],
        vec!["s-eval"],
        vec!["bogus"],
        vec!["s-table", "--tol", "1"],
        vec!["zeros", "--kmin", "5", "--kmax", "1"],
    ] {
        let o = zetaphi(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn tables_are_deterministic() {
    let a = zetaphi(&["phi-table", "--min", "-1", "--max", "1", "--step", "0.25"]);
    let b = zetaphi(&["phi-table", "--min", "-1", "--max", "1", "--step", "0.25"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 10);
    assert_eq!(text.lines().next(), Some("t,phi,phi0,phi1"));
}

#[test]
fn scan_table_json_parses() {
    let o = zetaphi(&[
        "ft-scan", "--min", "0", "--max", "3", "--step", "0.5", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 7);
}

#[test]
fn zero_scan_on_quiet_band_is_empty() {
    let o = zetaphi(&["zeros", "--kmin", "2", "--kmax", "8", "--step", "0.2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "root,k_lo,k_hi,residual");
}

#[test]
fn unresolved_scan_is_a_numeric_failure() {
    let o = zetaphi(&["zeros", "--kmin", "25", "--kmax", "30", "--step", "0.1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("not resolved"));
}

#[test]
fn theorem_check_off_zero_exits_one() {
    let o = zetaphi(&[
        "theorem-check",
        "--x",
        "0.5",
        "--y",
        "10.0",
        "--n-theta",
        "64",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("x,y,eps,abs_i"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn selftest_prints_one_row_per_criterion() {
    let o = zetaphi(&["selftest"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 12);
    assert!(rows
        .iter()
        .all(|r| r.contains(",PASS,") || r.contains(",FAIL,")));
    let all_pass = rows.iter().all(|r| r.contains(",PASS,"));
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 1 }));
}
