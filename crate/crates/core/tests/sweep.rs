use std::fs;

use sqrtlab_core::experiments::{run_sweep, PrimeRange, SweepConfig};
use sqrtlab_core::roots::LambdaStrategy;

fn config(dir: &std::path::Path, q_values: Vec<f64>) -> SweepConfig {
    SweepConfig {
        q_values,
        p_values: vec![],
        strategy: LambdaStrategy::Full,
        filter: PrimeRange::All,
        full_threshold: 100_000,
        output: dir.join("out").join("table.csv"),
    }
}

#[test]
fn one_cell_gives_one_average() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(dir.path(), vec![100.0]);
    let r = run_sweep(&c).unwrap();
    assert_eq!(r.cells.len(), 1);
    assert!(r.fit.is_none());
    assert_eq!(r.cells[0].row_count, r.rows.len());
    let summary = fs::read_to_string(c.summary_path()).unwrap();
    assert_eq!(summary.lines().count(), 2);
    assert!(summary.starts_with("p,q_max,primes,average,bound,ratio,row_offset,row_count,seed\n"));
    assert_eq!(fs::read_to_string(c.fit_path()).unwrap().trim(), "null");
}

#[test]
fn grid_gives_rows_and_a_fit() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(dir.path(), vec![256.0, 512.0, 1024.0, 2048.0, 4096.0]);
    let r = run_sweep(&c).unwrap();
    assert_eq!(r.cells.len(), 5);
    let fit = r.fit.unwrap();
    assert_eq!(fit.points, 5);
    assert!(fit.slope > 0.0 && fit.slope < 0.95, "slope {}", fit.slope);
    let text = fs::read_to_string(&c.output).unwrap();
    assert_eq!(text.lines().count(), 1 + r.rows.len());
}

#[test]
fn p_grid_respects_p_le_q() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(dir.path(), vec![50.0, 100.0]);
    c.p_values = vec![10.0, 80.0];
    let r = run_sweep(&c).unwrap();
    let cells: Vec<(f64, f64)> = r.cells.iter().map(|c| (c.p, c.q_max)).collect();
    assert_eq!(cells, [(10.0, 50.0), (10.0, 100.0), (80.0, 100.0)]);
}

#[test]
fn interrupted_runs_resume_to_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(dir.path(), vec![64.0, 128.0, 256.0]);
    let done = run_sweep(&c).unwrap();
    let full = fs::read(&c.output).unwrap();

    // keep the first cell plus a torn line, and leave a marker behind
    let first = done.cells[0].row_count;
    let text = String::from_utf8(full.clone()).unwrap();
    let kept: Vec<&str> = text.lines().take(1 + first).collect();
    fs::write(&c.output, format!("{}\n199,3,4", kept.join("\n"))).unwrap();
    let marker = serde_json::json!({ "config": c, "cell_rows": [first] });
    fs::write(c.resume_path(), marker.to_string()).unwrap();

    let resumed = run_sweep(&c).unwrap();
    assert_eq!(resumed.resumed_cells, 1);
    assert_eq!(fs::read(&c.output).unwrap(), full);
    assert_eq!(resumed.cells, done.cells);
    assert!(!c.resume_path().exists());
}

#[test]
fn a_marker_from_another_config_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(dir.path(), vec![64.0, 128.0]);
    let clean = run_sweep(&c).unwrap();
    let mut other = c.clone();
    other.q_values = vec![32.0];
    fs::write(c.resume_path(), serde_json::json!({ "config": other, "cell_rows": [3] }).to_string()).unwrap();
    let again = run_sweep(&c).unwrap();
    assert_eq!(again.resumed_cells, 0);
    assert_eq!(again.rows, clean.rows);
}

#[test]
fn unwritable_output_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let mut c = config(dir.path(), vec![30.0]);
    c.output = blocker.join("table.csv");
    let e = run_sweep(&c).unwrap_err().to_string();
    assert!(e.contains(blocker.to_str().unwrap()), "{e}");
}
