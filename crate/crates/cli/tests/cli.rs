use std::fs;
use std::process::{Command, Output};

use dicke_core::sweep::{linspace, sweep_g, SweepConfig, SweepResult, CSV_SCHEMA};
use dicke_core::ModelParams;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dicke2p"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn no_args_is_a_usage_error() {
    let o = run(&[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn meanfield_running_example() {
    let o = run(&[
        "meanfield",
        "--omega",
        "1",
        "--omega-q",
        "0.005",
        "--n",
        "100",
        "--g",
        "0.45",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["meanfield"]["phase"], "Superradiant");
    let b = v["meanfield"]["beta_branches"].as_array().unwrap();
    assert_eq!(b.len(), 2);
    assert_eq!(b[0].as_f64().unwrap(), -b[1].as_f64().unwrap());
    assert!((b[0].as_f64().unwrap() - 5.8155).abs() < 1e-3);
    assert_eq!(v["params"]["n_qubits"], 100);
}

#[test]
fn collapse_coupling_exits_one() {
    let o = run(&["meanfield", "--g", "0.6"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("collapse") && err.contains("ω/2"), "{err}");
}

#[test]
fn sweep_csv_matches_schema_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(&[
            "sweep",
            "--lambda",
            "1",
            "--points",
            "200",
            "--output",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_SCHEMA));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    for col in [
        "g",
        "phase",
        "beta",
        "e_exc_over_omega_q",
        "var_xd",
        "var_xa",
        "r_a",
        "r_s",
    ] {
        assert!(header.contains(&col), "missing {col}");
    }
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| r.len() == header.len()));
    let e = header.iter().position(|c| *c == "e_exc_over_omega_q").unwrap();
    assert_eq!(rows[0][e].parse::<f64>().unwrap(), 1.0);
    assert!(rows.iter().any(|r| r[1] == "Superradiant"));
}

#[test]
fn sweep_json_round_trips() {
    let o = run(&["sweep", "--lambda", "1", "--points", "40", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let parsed: SweepResult = serde_json::from_slice(&o.stdout).unwrap();
    let expected = sweep_g(
        &ModelParams::two_photon(1.0, 0.005, 0.2, 100),
        &linspace(0.0, 0.49, 40),
        &SweepConfig::default(),
    );
    assert_eq!(parsed, expected);
}

#[test]
fn ed_convergence_report() {
    let o = run(&[
        "ed",
        "--n",
        "4",
        "--omega-q",
        "0.1",
        "--cutoffs",
        "100,200,400",
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ed"]["converged"], true);
    assert_eq!(v["ed"]["convergence_history"].as_array().unwrap().len(), 3);
    assert_eq!(v["ed"]["cutoff_used"], 400);

    let text = run(&["ed", "--n", "4", "--omega-q", "0.1", "--cutoffs", "100,200,400"]);
    assert!(stdout(&text).contains("converged = true"));
}

#[test]
fn exponents_prints_the_table() {
    let o = run(&["exponents"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.matches("PASS").count(), 3, "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# running example\nomega_q = 0.005\nn = 100\ng = 0.1\n").unwrap();
    let c = cfg.to_str().unwrap();

    let v: Value = serde_json::from_slice(&run(&["meanfield", "--config", c]).stdout).unwrap();
    assert_eq!(v["params"]["g"], 0.1);
    assert_eq!(v["meanfield"]["phase"], "Normal");
    let v: Value = serde_json::from_slice(&run(&["meanfield", "--config", c, "--g", "0.45"]).stdout).unwrap();
    assert_eq!(v["params"]["g"], 0.45);

    fs::write(&cfg, "g = 0.1\ncolour = blue\n").unwrap();
    let o = run(&["meanfield", "--config", c]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"));
}

#[test]
fn conflicting_and_malformed_flags() {
    assert_eq!(
        run(&["sweep", "--lambda", "1", "--omega-q", "0.01"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["meanfield", "--n", "many"]).status.code(), Some(2));
    assert_eq!(run(&["ed", "--n", "2", "--cutoffs", "10,20"]).status.code(), Some(1));
}

#[test]
fn document_csv_has_schema_line() {
    let o = run(&["fluctuations", "--g", "0.45", "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("# schema: dicke2p-fluctuations/1"));
    assert_eq!(lines.next(), Some("key,value"));
    assert!(out.lines().any(|l| l.starts_with("fluctuations.e_exc,")));
}
