use std::process::Command as Process;

use quadseries_cli::{render, run, Command, OutputFormat, Report, RunConfig, Scalar, Status};

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_quadseries"))
}

#[test]
fn json_round_trip() {
    let configs = [
        RunConfig::new(Command::Coeff).with("kind", "circ").with("N", 6).with("D", 0),
        RunConfig::new(Command::Eval).with("fn", "zeta-star").with("s", "0.3,-2"),
        RunConfig::new(Command::Eval).with("fn", "level1").with("n", 2).with("s", "1.2"),
        RunConfig::new(Command::Verify).with("suite", "twist"),
    ];
    for cfg in configs {
        let (status, report) = run(&cfg);
        assert_eq!(status, Status::Ok, "{cfg:?}");
        let text = render(&report, OutputFormat::Json).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
    }
}

#[test]
fn scans_do_not_depend_on_thread_count() {
    let base = RunConfig::new(Command::Scan).with("thm3", true).with("X", 20_000);
    let one = run(&base).1.results;
    let four = run(&RunConfig { thread_count: 4, ..base }).1.results;
    assert_eq!(one, four);
    assert_eq!(one.last().unwrap().truncation, Some(20_000));
}

#[test]
fn residue_report_carries_target() {
    let cfg = RunConfig::new(Command::Residue).with("n", 2).with("trunc", 3000);
    let (status, report) = run(&cfg);
    let row = &report.results[0];
    assert_eq!(status, Status::Ok, "{row:?}");
    assert_eq!(row.target, Some(Scalar::Real(1.5)));
    assert!(row.heuristic_tail);
}

#[test]
fn invalid_configs_exit_2() {
    let cases = [
        RunConfig::new(Command::Scan).with("thm3", true).with("X", 200_000),
        RunConfig::new(Command::Eval).with("fn", "nope"),
        RunConfig::new(Command::Coeff).with("N", 4).with("D", 5),
        RunConfig { thread_count: 0, ..RunConfig::new(Command::Verify) },
    ];
    for cfg in cases {
        assert_eq!(run(&cfg).0, Status::InvalidConfig, "{cfg:?}");
    }
    let long = RunConfig { long_run: true, ..RunConfig::new(Command::Scan).with("thm3", true).with("X", 100_001) };
    assert_eq!(run(&long).0, Status::Ok);
}

#[test]
fn binary_exit_codes() {
    let ok = bin().args(["verify", "--suite", "lemmas", "--max-D", "2000"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    let report: Report = serde_json::from_str(&text).unwrap();
    assert!(report.results.iter().all(|r| r.pass == Some(true)));

    // Phi's left limit at x = 1 closes like sqrt(1 - x), wider than 1e-4 at 1 - 1e-6
    let fail = bin().args(["verify", "--suite", "special"]).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));
    let report: Report = serde_json::from_slice(&fail.stdout).unwrap();
    assert!(report.results.iter().any(|r| r.id.starts_with("fourier") && r.pass == Some(true)));

    let bad = bin().args(["scan", "--thm3", "--X", "200000"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let usage = bin().args(["residue"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn scan_csv_shape() {
    let out = bin().args(["scan", "--remark", "--n", "2", "--X", "300", "--csv"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(reader.headers().unwrap(), vec!["X_partial", "sum", "main_term", "rel_dev"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 12);
    assert_eq!(&rows[11][0], "300");
    assert_eq!(&rows[11][2], "450");
}

#[test]
fn coefficient_csv_quotes_commas() {
    let out = bin().args(["coeff", "--kind", "circ", "--N", "3", "--D", "-3", "--csv"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"circ(N=3,D=-3)\""), "{text}");
}

#[test]
fn cache_file_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l1.csv");
    let cfg = RunConfig { cache_path: Some(path.clone()), ..RunConfig::new(Command::Scan).with("remark", true).with("X", 50) };
    let first = run(&cfg).1.results;
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l.starts_with("5,")));
    let second = run(&cfg).1.results;
    assert_eq!(first, second);
}
