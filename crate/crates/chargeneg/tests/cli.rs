use std::path::Path;
use std::process::{Command, Output};

use chargeneg::formats::{CoefficientFile, HamiltonianFile};
use chargeneg::table::{Cell, Table};
use chargeneg_core::harness::{convergence_sweep, temperature_grid, SweepConfig};
use chargeneg_core::model::{make_partition, Ensemble};

const SMALL_SWEEP: &str = r#"
[sweep]
ensemble = { kind = "local", decay_length = 1.0, scale = 1.0 }
n = 24
seed_start = 5
seed_count = 3
a = [4, 8]
b = [11, 16]
t_min = 0.2
t_max = 5.0
points = 4
"#;

fn chargeneg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chargeneg"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn replica_limit_coefficients_as_json() {
    let out = chargeneg(&["coeffs", "--order", "4", "--limit"]);
    assert!(out.status.success());
    let file: CoefficientFile = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(file.order, 4);
    assert_eq!(file.n_e.as_deref(), Some("1"));
    assert_eq!(file.terms["3,1"].num, ["-1"]);
    assert_eq!(file.terms["3,1"].den, ["24"]);
    assert_eq!(file.terms["2,2"].num, ["1"]);
    assert_eq!(file.terms["2,2"].den, ["8"]);
}

#[test]
fn coefficients_at_a_replica_index_as_csv() {
    let out = chargeneg(&["coeffs", "--order", "2", "--ne", "2", "--format", "csv"]);
    assert!(out.status.success());
    let table = Table::read_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(table.columns, ["a", "b", "coefficient", "value"]);
    let row = table
        .rows
        .iter()
        .find(|r| r[0] == Cell::Int(1) && r[1] == Cell::Int(1))
        .unwrap();
    // -(n^2 + 2)/(6n) at n = 2
    assert_eq!(row[3], Cell::Float(-0.5));

    let odd = chargeneg(&["coeffs", "--order", "3", "--format", "csv"]);
    assert!(odd.status.success());
    assert!(odd.stdout.is_empty());
}

#[test]
fn sweep_csv_round_trips_against_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_SWEEP);
    let out_path = dir.path().join("sweep.csv");
    let out = chargeneg(&["verify", "--config", &config, "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let table = Table::read_csv(std::fs::File::open(&out_path).unwrap()).unwrap();
    let cfg = SweepConfig {
        ensemble: Ensemble::Local {
            decay_length: 1.0,
            scale: 1.0,
        },
        seeds: vec![5, 6, 7],
        partition: make_partition(24, 4, 8, 11, 16).unwrap(),
        temperatures: temperature_grid(0.2, 5.0, 4).unwrap(),
        chemical_potential: 0.0,
    };
    let rows = convergence_sweep(&cfg).unwrap();
    assert_eq!(table.rows.len(), rows.len());
    assert_eq!(table.columns.len(), 21);
    assert_eq!(table.columns[20], "status");
    for (cells, row) in table.rows.iter().zip(&rows) {
        assert_eq!(cells[0], Cell::Int(row.seed as i64));
        for (cell, v) in cells[1..20].iter().zip(row.values()) {
            match cell {
                Cell::Float(x) => assert_eq!(x.to_bits(), v.to_bits()),
                other => panic!("expected a float, got {other:?}"),
            }
        }
        assert_eq!(cells[20], Cell::Text("ok".into()));
    }
}

#[test]
fn seed_flag_shifts_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_SWEEP);
    let out = chargeneg(&["verify", "--config", &config, "--seed", "40", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"][0][0], 40);
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn hamiltonian_json_loads_back() {
    let out = chargeneg(&["gen-hamiltonian", "--ensemble", "local", "--sites", "6", "--seed", "3"]);
    assert!(out.status.success());
    let file: HamiltonianFile = serde_json::from_slice(&out.stdout).unwrap();
    let h = file.to_hopping().unwrap();
    assert_eq!(h.n(), 6);
    assert_eq!(h.seed(), Some(3));
    assert!(h.matrix().hermiticity_defect() == 0.0);
    assert_eq!(
        chargeneg(&["gen-hamiltonian", "--format", "csv"]).status.code(),
        Some(1)
    );
}

#[test]
fn oracle_check_passes_on_small_systems() {
    let out = chargeneg(&["oracle-check", "--modes", "5", "--seeds", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = Table::read_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(table.rows.len(), 3);
    let status = table.column("status").unwrap();
    assert!(table.rows.iter().all(|r| r[status] == Cell::Text("ok".into())));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    // Invalid configuration.
    let bad = write_config(dir.path(), "[sweep]\nunknown_key = 1\n");
    assert_eq!(chargeneg(&["verify", "--config", &bad]).status.code(), Some(1));
    let missing = dir.path().join("missing.toml");
    assert_eq!(
        chargeneg(&["verify", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        chargeneg(&["coeffs", "--order", "2", "--ne", "x/y"]).status.code(),
        Some(1)
    );
    assert_eq!(chargeneg(&["coeffs", "--order", "0"]).status.code(), Some(1));

    // Beyond the oracle's mode cap.
    assert_eq!(
        chargeneg(&["oracle-check", "--modes", "13", "--seeds", "1"])
            .status
            .code(),
        Some(1)
    );

    // Unwritable output path.
    let nowhere = dir.path().join("no/such/dir/out.json");
    assert_eq!(
        chargeneg(&["coeffs", "--order", "2", "--out", nowhere.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );

    // A zero tolerance cannot be met: acceptance failure.
    let strict = write_config(dir.path(), "[oracle]\nbetas = [1.0]\ntolerance = 0.0\n");
    let out = chargeneg(&["oracle-check", "--config", &strict, "--modes", "4", "--seeds", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let table = Table::read_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(table.rows.len(), 2);
}
