use std::process::{Command, Output};

fn charlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charlab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn delta_prints_twelve_digits() {
    let o = charlab(&["delta", "--g", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0.173006656867");
}

#[test]
fn domain_and_usage_errors_exit_with_two() {
    assert_eq!(charlab(&["delta", "--g", "4"]).status.code(), Some(2));
    assert_eq!(charlab(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(charlab(&["scan", "--order", "3"]).status.code(), Some(2));
    assert_eq!(charlab(&["scan", "--order", "4", "--qmin", "5", "--qmax", "50"]).status.code(), Some(2));
    assert_eq!(charlab(&["paley", "--qmax", "3"]).status.code(), Some(2));
    assert_eq!(charlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_reports_a_passing_suite() {
    let o = charlab(&["verify", "--suite", "fejer", "--seed", "7", "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS fejer"));
}

#[test]
fn msum_prints_one_record() {
    let o = charlab(&["msum", "--modulus", "5", "--char-index", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("q,char_exps,order,parity,conductor,M,"));
    assert!(lines[1].starts_with("5,2,2,even,5,1,0.4472135955,"));
}

#[test]
fn scan_json_matches_csv_rows() {
    let args = ["scan", "--order", "5", "--qmin", "11", "--qmax", "200"];
    let csv = stdout(&charlab(&args));
    let json = stdout(&charlab(&[&args[..], &["--format", "json"]].concat()));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
    assert_eq!(rows.len() + 1, csv.lines().count());
    for (row, line) in rows.iter().zip(csv.lines().skip(1)) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(row["q"].as_u64().unwrap().to_string(), fields[0]);
        assert_eq!(row["order"], 5);
        assert_eq!(row["parity"], "even");
    }
}
