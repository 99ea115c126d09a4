//! End-to-end checks of the CSV front end: column contracts, provenance
//! headers, determinism and exit codes.

use std::process::{Command, Output};

fn szilard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_szilard"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = szilard(args);
    assert!(out.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .filter_map(|l| {
            l.split(',')
                .map(|c| c.parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .ok()
        })
        .collect()
}

#[test]
fn eigencurve_contract() {
    let csv = stdout_of(&[
        "eigencurve", "even", "1", "0", "10000", "--points", "60", "--p", "0.01",
    ]);
    assert!(csv.starts_with("# szilard "));
    assert!(csv.contains("# command: eigencurve even 1"));
    assert!(csv.contains("# seed: -"));
    assert!(csv.contains("V,E_numeric,E_hba,E_zurek_upper,E_zurek_lower"));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 60);
    // Unperturbed start and monotone numeric column.
    assert_eq!(rows[0][1], 1.0);
    for w in rows.windows(2) {
        assert!(w[1][1] >= w[0][1]);
    }
    // Final point matches the HBA value evaluated there to 0.5%.
    let last = rows.last().unwrap();
    assert!(((last[1] - last[2]) / last[1]).abs() < 5e-3);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        vec!["energy-surface", "--points", "21"],
        vec![
            "montecarlo", "engine", "--tg", "1.0", "--tw", "1.3", "--ma", "0.4", "--cycles",
            "20000", "--seed", "9",
        ],
        vec!["montecarlo", "demon", "--pa", "0.4", "--tau", "0.6", "--cycles", "20000"],
    ] {
        let a = stdout_of(&args);
        let b = stdout_of(&args);
        assert_eq!(a, b, "non-deterministic output for {args:?}");
    }
}

#[test]
fn energy_surface_zero_line_and_footer() {
    let csv = stdout_of(&["energy-surface", "--points", "21"]);
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 21 * 21);
    for row in &rows {
        // f vanishes exactly on the P1 = 0.5 line.
        if row[0] == 0.5 {
            assert_eq!(row[2], 0.0);
        }
        // Sign theorem on the grid.
        assert!(row[2] * (1.0 - 2.0 * row[0]) >= -1e-12);
    }
    assert!(csv.contains("# f_min:"));
    assert!(csv.contains("# f_max:"));
}

#[test]
fn entropy_surface_positivity_footers() {
    for slice in ["mc-zero", "mb-eq-mc"] {
        let csv = stdout_of(&["entropy-surface", "--slice", slice, "--points", "21"]);
        let min_line = csv
            .lines()
            .find(|l| l.starts_with("# dS_R_min:"))
            .expect("dS_R_min footer");
        let v: f64 = min_line.rsplit(' ').next().unwrap().parse().unwrap();
        assert!(v >= -1e-9, "{slice}: dS_R min {v}");
        // Corner value dS_R(P1=1, m_a=1) = 0 appears in the data.
        let rows = data_rows(&csv);
        let corner = rows
            .iter()
            .find(|r| r[0] == 1.0 && r[1] == 1.0)
            .expect("corner cell");
        assert!(corner[2].abs() < 1e-9);
    }
}

#[test]
fn montecarlo_engine_deterministic_resetting() {
    // T_G/T_W huge: P1 underflows to 0 and the raising cycle is absorbing.
    let csv = stdout_of(&[
        "montecarlo", "engine", "--tg", "1", "--tw", "0.000001", "--ma", "0.5", "--cycles",
        "50000",
    ]);
    let mean = csv
        .lines()
        .find(|l| l.starts_with("mean_flow,"))
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse::<f64>()
        .unwrap();
    assert_eq!(mean, 1.0);
}

#[test]
fn demon_report_flow_always_hot_to_cold() {
    let csv = stdout_of(&["demon-report", "--points", "12"]);
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 12 * 12);
    for row in &rows {
        assert!(row[8] <= 1e-12, "Q = {} at p_A={}, tau={}", row[8], row[0], row[1]);
    }
    let q_max_line = csv.lines().find(|l| l.starts_with("# Q_max:")).unwrap();
    let q_max: f64 = q_max_line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(q_max <= 1e-12);
}

#[test]
fn weight_split_starts_certain() {
    let csv = stdout_of(&["weight-split", "--tw", "100", "--points", "11"]);
    let rows = data_rows(&csv);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[0][1], 1.0);
    // Sum oracle tracks the closed form along the grid.
    for row in &rows {
        assert!((row[1] - row[2]).abs() < 0.02 * row[1].max(1e-6) + 1e-4);
    }
}

#[test]
fn expansion_work_column() {
    let csv = stdout_of(&["expansion", "--regime", "isothermal", "--tg", "100", "--points", "50"]);
    let rows = data_rows(&csv);
    let last = rows.last().unwrap();
    assert!((last[4] - 100.0 * std::f64::consts::LN_2).abs() < 1e-9);
    // Ideal-gas law P·V = T on every row.
    for row in &rows {
        assert!((row[2] * (row[0] + 0.99) - row[3]).abs() < 1e-9);
    }
}

#[test]
fn ledger_rows_and_markers() {
    let csv = stdout_of(&[
        "ledger", "--tg", "2.0", "--tw", "1.0", "--ma", "0.5",
    ]);
    assert!(csv.contains("raising,a,"));
    assert!(csv.contains("raising,b-mid,"));
    assert!(csv.contains("undefined"));
    assert!(csv.contains("lowering,f,"));
    assert!(csv.contains("# dS_R:"));
    assert!(csv.contains("# dF_L:"));
    // Total energy column is constant per cycle.
    for cycle in ["raising", "lowering"] {
        let totals: Vec<f64> = csv
            .lines()
            .filter(|l| l.starts_with(cycle))
            .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
            .collect();
        assert!(!totals.is_empty());
        for t in &totals {
            assert!((t - totals[0]).abs() < 1e-9);
        }
    }
}

#[test]
fn exit_codes() {
    // Unknown flag: clap's usage error, exit 2.
    let out = szilard(&["eigencurve", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    // Parameter validation, exit 2.
    let out = szilard(&["weight-split", "--tw", "-5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = szilard(&[
        "montecarlo", "engine", "--tg", "1", "--tw", "1", "--ma", "0.5", "--mb", "0.9",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // I/O failure, exit 4.
    let out = szilard(&[
        "energy-surface", "--points", "5", "--out", "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn file_output_matches_stdout() {
    let dir = std::env::temp_dir().join("szilard-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("surface.csv");
    let out = szilard(&[
        "energy-surface", "--points", "11", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let from_file = std::fs::read_to_string(&path).unwrap();
    let from_stdout = stdout_of(&["energy-surface", "--points", "11"]);
    assert_eq!(from_file, from_stdout);
}
