use std::f64::consts::PI;
use std::process::{Command, Output};

fn qgames(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgames"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows as `header -> column` lookups.
fn rows(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# qgames "));
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    (
        header,
        lines
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect(),
    )
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let (header, rows) = rows(csv);
    let i = header.iter().position(|h| h == name).unwrap();
    rows.into_iter().map(|r| r[i].clone()).collect()
}

#[test]
fn zeno_example_row() {
    let csv = stdout(&qgames(&[
        "bomb-zeno",
        "--n",
        "10",
        "--trials",
        "100000",
        "--seed",
        "7",
    ]));
    let (header, _) = rows(&csv);
    assert_eq!(
        header,
        [
            "n",
            "bomb",
            "trials",
            "survival_mc",
            "survival_exact",
            "std_err",
            "verdict1_mc",
            "verdict1_exact"
        ]
    );
    let exact: f64 = column(&csv, "survival_exact")[0].parse().unwrap();
    assert!((exact - (PI / 20.0).cos().powi(20)).abs() < 1e-12);
    let mc: f64 = column(&csv, "survival_mc")[0].parse().unwrap();
    let se: f64 = column(&csv, "std_err")[0].parse().unwrap();
    assert!((mc - exact).abs() <= 3.0 * se);
    assert!(csv.lines().next().unwrap().contains("seed=7"));
    assert!(!csv.contains('\r'));
}

#[test]
fn identities_all_pass() {
    let csv = stdout(&qgames(&["identities", "--tol", "1e-10", "--seed", "0"]));
    let pass = column(&csv, "pass");
    assert!(pass.len() >= 6);
    assert!(pass.iter().all(|p| p == "true"));
}

#[test]
fn missing_seed_and_bad_values_exit_2() {
    for args in [
        &["bomb-zeno", "--n", "10"][..],
        &["bomb-zeno", "--seed", "1", "--n", "0"],
        &["bomb-zeno", "--seed", "1", "--bomb", "ticking"],
        &["wiesner", "--seed", "1", "--k", "0"],
        &[
            "ising",
            "--seed",
            "1",
            "--cells",
            "7",
            "--schedule",
            "even_odd",
        ],
        &["ising", "--seed", "1", "--sweeps", "10", "--burn-in", "10"],
        &["newcomb", "--seed", "1", "--prob-not", "1.5"],
        &[
            "bomb-zeno",
            "--seed",
            "1",
            "--sweep-param",
            "bomb",
            "--sweep-values",
            "1",
        ],
        &["bomb-zeno", "--seed", "1", "--workers", "0"],
        &["bomb-zeno", "--seed", "1", "--no-such-flag", "1"],
    ] {
        let out = qgames(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(!err.is_empty());
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    let out = qgames(&["bomb-zeno", "--n", "10"]);
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);
}

#[test]
fn antizeno_needs_no_seed() {
    let csv = stdout(&qgames(&["bomb-antizeno", "--n", "4", "--bomb", "damaged"]));
    let v1: f64 = column(&csv, "verdict1")[0].parse().unwrap();
    assert!((v1 - 1.0).abs() < 1e-12);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# zeno\nn = 4\ntrials = 2000\nseed = 11\n").unwrap();
    let out = dir.path().join("out.csv");
    let cfg_s = cfg.to_str().unwrap();
    let out_s = out.to_str().unwrap();
    let status = qgames(&["bomb-zeno", "--config", cfg_s, "--n", "6", "--out", out_s]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(column(&csv, "n"), ["6"]);
    assert_eq!(column(&csv, "trials"), ["2000"]);
    // same file, same flags: identical bytes
    let again = stdout(&qgames(&["bomb-zeno", "--config", cfg_s, "--n", "6"]));
    assert_eq!(again, csv);

    std::fs::write(&cfg, "variant = swap\n").unwrap();
    assert_eq!(
        qgames(&["bomb-zeno", "--config", cfg_s, "--seed", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn zeno_sweep_is_ordered_and_monotone() {
    let csv = stdout(&qgames(&[
        "bomb-zeno",
        "--seed",
        "1",
        "--trials",
        "2000",
        "--sweep-param",
        "n",
        "--sweep-values",
        "1024,1,2,4,8,16,32,64,128,256,512",
    ]));
    let n: Vec<u32> = column(&csv, "n")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(n, [1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024]);
    let exact: Vec<f64> = column(&csv, "survival_exact")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    assert!(exact.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn supply_demand_sweep_dominates() {
    let values: Vec<String> = (1..=32).map(|n| n.to_string()).collect();
    let csv = stdout(&qgames(&[
        "supply-demand",
        "--seed",
        "2",
        "--trials",
        "500",
        "--sweep-param",
        "n",
        "--sweep-values",
        &values.join(","),
    ]));
    let dom = column(&csv, "dominates");
    assert_eq!(dom.len(), 32);
    assert!(dom.iter().all(|d| d == "true"));
}

#[test]
fn wiesner_sweep_decays() {
    let csv = stdout(&qgames(&[
        "wiesner",
        "--seed",
        "3",
        "--trials",
        "20000",
        "--sweep-param",
        "k",
        "--sweep-values",
        "1,2,3,4,5,6,7,8",
    ]));
    let rates: Vec<f64> = column(&csv, "pass_rate")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let errs: Vec<f64> = column(&csv, "std_err")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    for (k, (r, e)) in rates.iter().zip(&errs).enumerate() {
        let expected = 0.75f64.powi(k as i32 + 1);
        assert!(
            (r - expected).abs() <= 3.0 * e,
            "k = {}: {r} vs {expected}",
            k + 1
        );
    }
}

#[test]
fn sweep_rows_use_their_own_streams() {
    // the row for a value depends on its position, not on the other values
    let one = stdout(&qgames(&[
        "ev-breaker",
        "--seed",
        "4",
        "--trials",
        "3000",
        "--n",
        "3",
    ]));
    let swept = stdout(&qgames(&[
        "ev-breaker",
        "--seed",
        "4",
        "--trials",
        "3000",
        "--sweep-param",
        "n",
        "--sweep-values",
        "5,3",
    ]));
    assert_eq!(one.lines().nth(2), swept.lines().nth(2));
}

#[test]
fn ising_outputs() {
    let series = stdout(&qgames(&[
        "ising",
        "--seed",
        "1",
        "--cells",
        "8",
        "--sweeps",
        "50",
        "--burn-in",
        "10",
    ]));
    assert_eq!(
        rows(&series).0,
        ["sweep", "magnetization", "energy", "nn_correlation"]
    );
    assert_eq!(
        column(&series, "sweep").first().map(String::as_str),
        Some("11")
    );
    assert_eq!(rows(&series).1.len(), 40);
    let summary = stdout(&qgames(&[
        "ising",
        "--seed",
        "1",
        "--cells",
        "8",
        "--p",
        "0.5",
        "--sweeps",
        "200",
        "--burn-in",
        "10",
        "--mode",
        "quantum_cell",
        "--output",
        "summary",
    ]));
    assert_eq!(column(&summary, "beta_j"), [""]);
    assert_eq!(column(&summary, "nn_correlation_exact"), [""]);
    let swept = stdout(&qgames(&[
        "ising",
        "--seed",
        "1",
        "--cells",
        "8",
        "--sweeps",
        "300",
        "--burn-in",
        "100",
        "--sweep-param",
        "beta_j",
        "--sweep-values",
        "0.2,0.1",
    ]));
    assert_eq!(column(&swept, "cells").len(), 2);
    assert!(column(&swept, "beta_j")[0].starts_with("1.0"));
}

#[test]
fn newcomb_qutrojan_hides_lower_qubit() {
    let csv = stdout(&qgames(&[
        "newcomb",
        "--seed",
        "1",
        "--breaker",
        "qutrojan",
        "--trials",
        "5000",
    ]));
    let (_, data) = rows(&csv);
    let total: u64 = data.iter().map(|r| r[6].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 5000);
    for r in data.iter().filter(|r| r[5] == "1") {
        assert_eq!(r[6], "0");
    }
}
