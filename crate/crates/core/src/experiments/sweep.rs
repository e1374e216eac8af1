use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{avg_max_discrepancy_with, exponent_fit, FitResult, PrimeRange, SweepRow};
use crate::arith::{primes_up_to, sum_f64};
use crate::error::{invalid, Error, Result};
use crate::roots::{LambdaStrategy, DEFAULT_FULL_LAMBDA_THRESHOLD};

/// Header of the per-prime table.
pub const SWEEP_HEADER: [&str; 10] =
    ["q", "lambda_star", "delta_num", "delta_den", "n_q", "char_sum", "pi_p", "bound", "ratio", "seed"];

/// Header of the per-cell table.
pub const SUMMARY_HEADER: [&str; 9] =
    ["p", "q_max", "primes", "average", "bound", "ratio", "row_offset", "row_count", "seed"];

/// Reals are written with 12 significant digits, in the shortest decimal
/// that reads back to the rounded value.
pub fn format_real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    rounded.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SweepConfig {
    /// Values of `Q`, one cell per value and per admissible `P`.
    pub q_values: Vec<f64>,
    /// Values of `P`; empty means `P = Q` in every cell.
    #[serde(default)]
    pub p_values: Vec<f64>,
    pub strategy: LambdaStrategy,
    #[serde(default = "default_filter")]
    pub filter: PrimeRange,
    #[serde(default = "default_threshold")]
    pub full_threshold: u64,
    pub output: PathBuf,
}

fn default_filter() -> PrimeRange {
    PrimeRange::All
}

fn default_threshold() -> u64 {
    DEFAULT_FULL_LAMBDA_THRESHOLD
}

impl SweepConfig {
    /// The `(P, Q)` cells in run order: by `Q`, then by `P`, as listed.
    pub fn cells(&self) -> Result<Vec<(f64, f64)>> {
        if self.q_values.is_empty() {
            return Err(invalid("sweep needs at least one Q"));
        }
        for &q in &self.q_values {
            if !(q >= 3.0 && q.is_finite()) {
                return Err(invalid(format!("every Q must be at least 3, got {q}")));
            }
        }
        for &p in &self.p_values {
            if !(p >= 2.0 && p.is_finite()) {
                return Err(invalid(format!("every P must be at least 2, got {p}")));
            }
        }
        if let LambdaStrategy::Sample { k: 0, .. } = self.strategy {
            return Err(invalid("sample size must be at least 1"));
        }
        let cells: Vec<(f64, f64)> = if self.p_values.is_empty() {
            self.q_values.iter().map(|&q| (q, q)).collect()
        } else {
            self.q_values
                .iter()
                .flat_map(|&q| self.p_values.iter().filter(move |&&p| p <= q).map(move |&p| (p, q)))
                .collect()
        };
        if cells.is_empty() {
            return Err(invalid("no cell of the grid satisfies P ≤ Q"));
        }
        Ok(cells)
    }

    pub fn summary_path(&self) -> PathBuf {
        self.output.with_extension("summary.csv")
    }

    pub fn fit_path(&self) -> PathBuf {
        self.output.with_extension("fit.json")
    }

    pub fn resume_path(&self) -> PathBuf {
        let mut s = self.output.clone().into_os_string();
        s.push(".resume.json");
        PathBuf::from(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub p: f64,
    pub q_max: f64,
    pub primes: usize,
    pub average: f64,
    pub bound: f64,
    pub ratio: f64,
    pub row_offset: usize,
    pub row_count: usize,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub cells: Vec<CellSummary>,
    /// `log average` against `log Q`; present when there are at least three
    /// cells with distinct `Q` and positive averages.
    pub fit: Option<FitResult>,
    pub rows: Vec<SweepRow>,
    /// Cells that were read back from an interrupted run.
    pub resumed_cells: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct ResumeMarker {
    config: SweepConfig,
    /// Rows written by each finished cell, in run order.
    cell_rows: Vec<usize>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |e| match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Format(format!("{}: {other:?}", path.display())),
    }
}

fn row_record(r: &SweepRow) -> [String; 10] {
    [
        r.q.to_string(),
        r.lambda_star.to_string(),
        r.delta_num.to_string(),
        r.delta_den.to_string(),
        r.n_q.to_string(),
        r.char_sum.to_string(),
        r.pi_p.to_string(),
        format_real(r.bound),
        format_real(r.ratio),
        r.seed.map(|s| s.to_string()).unwrap_or_default(),
    ]
}

fn parse_row(rec: &csv::StringRecord, path: &Path) -> Result<SweepRow> {
    let bad = || Error::Format(format!("{}: malformed row {rec:?}", path.display()));
    if rec.len() != SWEEP_HEADER.len() {
        return Err(bad());
    }
    let int = |i: usize| rec[i].parse::<u64>().map_err(|_| bad());
    let real = |i: usize| rec[i].parse::<f64>().map_err(|_| bad());
    Ok(SweepRow {
        q: int(0)?,
        lambda_star: int(1)?,
        delta_num: int(2)?,
        delta_den: int(3)?,
        n_q: int(4)?,
        char_sum: rec[5].parse().map_err(|_| bad())?,
        pi_p: int(6)?,
        bound: real(7)?,
        ratio: real(8)?,
        seed: if rec[9].is_empty() { None } else { Some(int(9)?) },
    })
}

/// Rows already written by an interrupted run of the same configuration.
fn resume_state(config: &SweepConfig) -> Result<Option<(Vec<usize>, Vec<SweepRow>)>> {
    let marker_path = config.resume_path();
    let Ok(text) = fs::read_to_string(&marker_path) else {
        return Ok(None);
    };
    let Ok(marker) = serde_json::from_str::<ResumeMarker>(&text) else {
        return Ok(None);
    };
    if marker.config != *config {
        return Ok(None);
    }
    let Ok(mut reader) = csv::Reader::from_path(&config.output) else {
        return Ok(None);
    };
    let rows_done: usize = marker.cell_rows.iter().sum();
    let mut rows = Vec::with_capacity(rows_done);
    for rec in reader.records().take(rows_done) {
        let rec = rec.map_err(csv_err(&config.output))?;
        rows.push(parse_row(&rec, &config.output)?);
    }
    if rows.len() != rows_done {
        return Ok(None);
    }
    Ok(Some((marker.cell_rows, rows)))
}

fn write_marker(config: &SweepConfig, cell_rows: &[usize]) -> Result<()> {
    let path = config.resume_path();
    let tmp = path.with_extension("tmp");
    let marker = ResumeMarker {
        config: config.clone(),
        cell_rows: cell_rows.to_vec(),
    };
    let text = serde_json::to_string_pretty(&marker).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(&tmp, text).map_err(io_err(&tmp))?;
    fs::rename(&tmp, &path).map_err(io_err(&path))
}

fn summarize(p: f64, q_max: f64, rows: &[SweepRow], offset: usize, bound: f64, seed: Option<u64>) -> CellSummary {
    let average = sum_f64(rows.iter().map(SweepRow::delta)) / q_max;
    CellSummary {
        p,
        q_max,
        primes: rows.len(),
        average,
        bound,
        ratio: average / bound,
        row_offset: offset,
        row_count: rows.len(),
        seed,
    }
}

/// Runs every cell of the grid, writing the per-prime table to
/// `config.output`, the per-cell table next to it (`.summary.csv`) and the
/// fit (`.fit.json`). Progress is checkpointed after each cell; a rerun
/// with the same configuration picks up after the last finished cell.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    let cells = config.cells()?;
    let top = cells.iter().map(|c| c.1).fold(0.0, f64::max);
    let primes = primes_up_to(top.floor() as u64)?;

    let (mut cell_rows, mut rows) = resume_state(config)?.unwrap_or_default();
    cell_rows.truncate(cells.len());
    let start = cell_rows.len();
    let mut summaries = Vec::with_capacity(cells.len());
    let mut offset = 0;
    for (&(p, q), &count) in cells.iter().zip(&cell_rows) {
        let bound = crate::expsums::theorem_bound(p, q)?;
        summaries.push(summarize(p, q, &rows[offset..offset + count], offset, bound, config.strategy.seed()));
        offset += count;
    }

    let out = &config.output;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    // rewrite what is kept so a torn tail from the interrupted run is dropped
    {
        let file = File::create(out).map_err(io_err(out))?;
        let mut w = csv::Writer::from_writer(BufWriter::new(file));
        w.write_record(SWEEP_HEADER).map_err(csv_err(out))?;
        for r in &rows {
            w.write_record(row_record(r)).map_err(csv_err(out))?;
        }
        w.flush().map_err(io_err(out))?;
    }
    write_marker(config, &cell_rows)?;

    for &(p, q) in &cells[start..] {
        let cell = avg_max_discrepancy_with(p, q, config.filter, config.strategy, &primes, config.full_threshold)?;
        let file = OpenOptions::new().append(true).open(out).map_err(io_err(out))?;
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(BufWriter::new(file));
        for r in &cell.rows {
            w.write_record(row_record(r)).map_err(csv_err(out))?;
        }
        w.flush().map_err(io_err(out))?;
        // rows go through their text form so a resumed run sees the same values
        let written: Vec<SweepRow> = cell
            .rows
            .iter()
            .map(|r| parse_row(&csv::StringRecord::from(row_record(r).to_vec()), out))
            .collect::<Result<_>>()?;
        summaries.push(summarize(p, q, &written, rows.len(), cell.bound, config.strategy.seed()));
        cell_rows.push(written.len());
        rows.extend(written);
        write_marker(config, &cell_rows)?;
    }

    let fit = fit_cells(&summaries);
    write_summary(&config.summary_path(), &summaries)?;
    let fit_path = config.fit_path();
    let fit_text = serde_json::to_string_pretty(&fit).map_err(|e| Error::Format(e.to_string()))? + "\n";
    fs::write(&fit_path, fit_text).map_err(io_err(&fit_path))?;
    let marker = config.resume_path();
    fs::remove_file(&marker).map_err(io_err(&marker))?;
    Ok(SweepResult {
        cells: summaries,
        fit,
        rows,
        resumed_cells: start,
    })
}

fn fit_cells(cells: &[CellSummary]) -> Option<FitResult> {
    let mut qs: Vec<u64> = cells.iter().map(|c| c.q_max.to_bits()).collect();
    qs.sort_unstable();
    qs.dedup();
    if qs.len() != cells.len() || cells.len() < 3 || cells.iter().any(|c| !(c.average > 0.0)) {
        return None;
    }
    let series: Vec<(f64, f64)> = cells.iter().map(|c| (c.q_max, c.average)).collect();
    exponent_fit(&series, true).ok()
}

fn write_summary(path: &Path, cells: &[CellSummary]) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record(SUMMARY_HEADER).map_err(csv_err(path))?;
    for c in cells {
        w.write_record([
            format_real(c.p),
            format_real(c.q_max),
            c.primes.to_string(),
            format_real(c.average),
            format_real(c.bound),
            format_real(c.ratio),
            c.row_offset.to_string(),
            c.row_count.to_string(),
            c.seed.map(|s| s.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err(path))?;
    }
    let mut inner = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    inner.flush().map_err(io_err(path))
}
