use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sqrtlab_core::roots::DiscrepancyReport;

fn sqrtlab(args: &[&str]) -> Output {
    sqrtlab_env(args, &[])
}

fn sqrtlab_env(args: &[&str], env: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sqrtlab"));
    cmd.args(args).env_remove("SQRTLAB_CACHE_DIR").env_remove("SOURCE_DATE_EPOCH");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn sqrt_prints_both_roots() {
    let o = sqrtlab(&["sqrt", "--q", "11", "--a", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "5 6");
}

#[test]
fn discrepancy_json_round_trips() {
    let o = sqrtlab(&["discrepancy", "--q", "11", "--p-max", "10", "--lambda", "1", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &doc["results"][0];
    assert_eq!(r["delta_numerator"], 28);
    assert_eq!(r["denominator"], 11);
    assert_eq!(r["interval"], serde_json::json!([4, 7]));
    assert_eq!(doc["meta"]["subcommand"], "discrepancy");
    assert_eq!(doc["meta"]["version"], sqrtlab_core::VERSION);
    assert!(doc["meta"]["computed_at"].is_string());

    let report: DiscrepancyReport = serde_json::from_value(r.clone()).unwrap();
    assert_eq!(serde_json::to_value(&report).unwrap(), *r);
}

#[test]
fn avg_json_rows_round_trip() {
    let o = sqrtlab(&["avg", "--q-max", "30", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let r: sqrtlab_core::experiments::MaxDiscrepancyAverage = serde_json::from_value(doc["results"][0].clone()).unwrap();
    assert_eq!(r.rows.first().unwrap().q, 3);
    assert_eq!(serde_json::to_value(&r).unwrap(), doc["results"][0]);
    assert!(doc["meta"]["notes"][0].as_str().unwrap().contains("q = 2"));
}

#[test]
fn avg_csv_has_the_sweep_header() {
    let o = sqrtlab(&["avg", "--q-max", "30", "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "q,lambda_star,delta_num,delta_den,n_q,char_sum,pi_p,bound,ratio,seed");
    assert_eq!(text.lines().count(), 1 + 9);
}

#[test]
fn missing_config_is_a_usage_error() {
    let o = sqrtlab(&["sweep", "--config", "missing.toml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("usage error:"), "{}", stderr(&o));
    assert_eq!(stderr(&o).lines().count(), 1);
}

#[test]
fn error_prefixes_and_codes() {
    let o = sqrtlab(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("unknown subcommand: frobnicate"), "{}", stderr(&o));

    let o = sqrtlab(&["discrepancy", "--q", "12", "--p-max", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("invalid parameter:"), "{}", stderr(&o));

    let o = sqrtlab(&["maxlambda", "--q", "101", "--p-max", "10", "--full-threshold", "50"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("budget exceeded:"), "{}", stderr(&o));

    let o = sqrtlab(&["sqrt", "--q", "11"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("usage error:"), "{}", stderr(&o));
    assert_eq!(stderr(&o).lines().count(), 1);

    let o = sqrtlab(&["sqrt", "--q", "11", "--a", "3", "--out", "/nonexistent/dir/out.txt"]);
    assert_eq!(o.status.code(), Some(1));

    let o = sqrtlab(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "q = 11\na = 4\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = sqrtlab(&["sqrt", "--config", c]);
    assert_eq!(stdout(&o).trim(), "2 9");
    let o = sqrtlab(&["sqrt", "--config", c, "--a", "3"]);
    assert_eq!(stdout(&o).trim(), "5 6");
}

#[test]
fn sweep_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    std::fs::write(&cfg, "q_values = [32, 64, 128]\nstrategy = \"sample\"\nsamples = 8\nseed = 5\n").unwrap();
    let mut tables = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let out = dir.path().join(name);
        let o = sqrtlab(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).contains("slope"));
        tables.push(std::fs::read(&out).unwrap());
        assert!(out.with_extension("summary.csv").exists());
        assert!(!dir.path().join(format!("{name}.resume.json")).exists());
    }
    assert_eq!(tables[0], tables[1]);
    let text = String::from_utf8(tables[0].clone()).unwrap();
    assert!(text.starts_with("q,lambda_star,delta_num,delta_den,n_q,char_sum,pi_p,bound,ratio,seed\n"));
    assert!(text.lines().nth(1).unwrap().ends_with(",5"));
}

#[test]
fn cache_hits_misses_and_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["avg", "--q-max", "40", "--format", "json", "--cache-dir", cache.to_str().unwrap()];
    let first = sqrtlab(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    let entries = || std::fs::read_dir(&cache).map(|d| d.count()).unwrap_or(0);
    assert_eq!(entries(), 1);
    // the timestamp has sub-second resolution, so equal bytes mean a hit
    let second = sqrtlab(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(entries(), 1);

    let changed = sqrtlab(&["avg", "--q-max", "40", "--p-max", "39", "--format", "json", "--cache-dir", cache.to_str().unwrap()]);
    assert!(changed.status.success());
    assert_eq!(entries(), 2);

    let fresh = sqrtlab(&["avg", "--q-max", "40", "--format", "json", "--cache-dir", cache.to_str().unwrap(), "--no-cache"]);
    assert_ne!(fresh.stdout, first.stdout);

    let other = dir.path().join("env-cache");
    let o = sqrtlab_env(&args, &[("SQRTLAB_CACHE_DIR", &other)]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_dir(&other).unwrap().count(), 1);
}

#[test]
fn corrupt_cache_entries_are_not_served() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["sqrt", "--q", "11", "--a", "3", "--cache-dir", cache.to_str().unwrap()];
    assert!(sqrtlab(&args).status.success());
    let entry = std::fs::read_dir(&cache).unwrap().next().unwrap().unwrap().path();
    let mut bytes = std::fs::read(&entry).unwrap();
    let n = bytes.len();
    bytes[n - 2] = b'9';
    std::fs::write(&entry, &bytes).unwrap();
    let o = sqrtlab(&args);
    assert_eq!(stdout(&o).trim(), "5 6");
    assert!(stderr(&o).contains("corrupt cache entry"));
}

#[test]
fn pinned_timestamps_make_json_reproducible() {
    let run = || {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_sqrtlab"));
        cmd.args(["bounds", "--p-max", "1000", "--q-max", "1000", "--format", "json"])
            .env("SOURCE_DATE_EPOCH", "1700000000")
            .env_remove("SQRTLAB_CACHE_DIR");
        cmd.output().unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["meta"]["computed_at"], "2023-11-14T22:13:20Z");
}

#[test]
fn every_subcommand_runs() {
    let cases: &[&[&str]] = &[
        &["sieve", "--limit", "30"],
        &["jacobi", "--k", "-1", "--q", "7"],
        &["gauss", "--q", "7", "--a", "1"],
        &["maxlambda", "--q", "11", "--p-max", "10"],
        &["weyl", "--q", "7", "--p-max", "2"],
        &["weyl", "--q", "7", "--p-max", "10", "--mangoldt"],
        &["bilinear", "--q", "11", "--m", "3", "--n", "3", "--weights", "random"],
        &["incomplete", "--q", "11", "--w", "11"],
        &["bounds", "--p-max", "100", "--q-max", "1000"],
        &["hb-verify", "--j", "2", "--n-max", "1000"],
        &["charavg", "--q-max", "1000"],
        &["spacings", "--q", "11", "--n-max", "4", "--bins", "5"],
        &["verify"],
    ];
    for args in cases {
        for format in ["plain", "json", "csv"] {
            let mut full = args.to_vec();
            full.extend(["--format", format]);
            let o = sqrtlab(&full);
            assert!(o.status.success(), "{full:?}: {}", stderr(&o));
            assert!(!o.stdout.is_empty(), "{full:?}");
        }
    }
    assert_eq!(stdout(&sqrtlab(&["sieve", "--limit", "30"])).trim(), "2 3 5 7 11 13 17 19 23 29");
    assert_eq!(stdout(&sqrtlab(&["jacobi", "--k", "-1", "--q", "7"])).trim(), "-1");
}
