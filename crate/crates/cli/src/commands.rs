//! One function per subcommand, each turning parsed arguments into an
//! [`Outcome`].

use std::fmt::Write as _;
use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sqrtlab_core::arith::{
    gauss_sum_closed, gauss_sum_direct, jacobi, primes_up_to, sqrt_mod, Modulus, PrimeTable,
};
use sqrtlab_core::experiments::{
    avg_char_deviation, avg_max_discrepancy_with, format_real, run_sweep, spacing_histogram, CellSummary,
    FitResult, PrimeRange, SweepConfig, SweepRow, SUMMARY_HEADER, SWEEP_HEADER,
};
use sqrtlab_core::expsums::{
    bilinear_w_with, bound_b, bounds_old, incomplete_sqrt_sum, mangoldt_sum, optimized_parameters,
    theorem_bound, weyl_sum_s, OptimizedParameters, SumValue, WeightVector,
};
use sqrtlab_core::identity::{verify_hb_range, HBParams};
use sqrtlab_core::roots::{build_root_set, discrepancy, max_discrepancy_over_lambda_with, DiscrepancyReport, LambdaStrategy};
use sqrtlab_core::{checks, Error};

use crate::args::*;
use crate::error::CliError;
use crate::output::{cell, Outcome, Table};

type Res = Result<Outcome, CliError>;

const Q2_NOTE: &str = "q = 2 is excluded from every average over q";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SieveResult {
    pub limit: u64,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primes: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqrtResult {
    pub q: u64,
    pub a: u64,
    pub roots: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiResult {
    pub k: i64,
    pub q: u64,
    pub symbol: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussResult {
    pub q: u64,
    pub a: u64,
    pub b: u64,
    pub direct: Complex64,
    pub closed: Complex64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxLambdaResult {
    pub q: u64,
    pub lambda_star: u64,
    pub strategy: LambdaStrategy,
    pub report: DiscrepancyReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsResult {
    pub p_max: f64,
    pub q_max: f64,
    pub theorem_bound: f64,
    pub optimized: OptimizedParameters,
    pub m: f64,
    pub n: f64,
    pub bound_b: f64,
    pub bounds_old: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HbResult {
    pub params: HBParams,
    pub validity_limit: u64,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub output: PathBuf,
    pub summary: PathBuf,
    pub fit_file: PathBuf,
    pub rows: usize,
    pub resumed_cells: usize,
    pub cells: Vec<CellSummary>,
    pub fit: Option<FitResult>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Core(Error::InvalidParameter(msg.into()))
}

/// A prime table reaching `x` (at least 2).
fn table_for(x: f64) -> Result<PrimeTable, CliError> {
    if !x.is_finite() {
        return Err(invalid(format!("bound must be finite, got {x}")));
    }
    Ok(primes_up_to((x.max(2.0).floor()) as u64)?)
}

fn complex(z: Complex64) -> String {
    format!("{} {} {}i", format_real(z.re), if z.im < 0.0 { '-' } else { '+' }, format_real(z.im.abs()))
}

fn strategy(s: &StrategyArgs) -> LambdaStrategy {
    match s.strategy {
        StrategyKind::Full => LambdaStrategy::Full,
        StrategyKind::Sample => LambdaStrategy::Sample { k: s.samples, seed: s.seed },
    }
}

fn filter(f: &FilterArgs) -> Result<PrimeRange, CliError> {
    Ok(match f.filter {
        FilterKind::All => PrimeRange::All,
        FilterKind::Dyadic => PrimeRange::Dyadic,
        FilterKind::Range => match (f.q_lo, f.q_hi) {
            (Some(lo), Some(hi)) => PrimeRange::Range { lo, hi },
            _ => return Err(invalid("--filter range needs both --q-lo and --q-hi")),
        },
    })
}

pub fn sieve(a: &SieveArgs) -> Res {
    let t = primes_up_to(a.limit)?;
    let primes = t.primes().to_vec();
    let plain = if a.count_only {
        t.len().to_string()
    } else {
        primes.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
    };
    let rec = SieveResult {
        limit: a.limit,
        count: t.len(),
        primes: (!a.count_only).then_some(primes),
    };
    Ok(Outcome::new(&[rec], plain))
}

pub fn sqrt(a: &SqrtArgs) -> Res {
    let q = Modulus::new(a.q)?;
    let roots = sqrt_mod(a.a, &q)?;
    let plain = if roots.is_empty() {
        "none".to_string()
    } else {
        roots.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
    };
    Ok(Outcome::new(&[SqrtResult { q: a.q, a: a.a, roots }], plain))
}

pub fn jacobi_cmd(a: &JacobiArgs) -> Res {
    let symbol = jacobi(a.k, a.q)?;
    Ok(Outcome::new(&[JacobiResult { k: a.k, q: a.q, symbol }], symbol.to_string()))
}

pub fn gauss(a: &GaussArgs) -> Res {
    let q = Modulus::new(a.q)?;
    let direct = gauss_sum_direct(a.a, a.b, &q)?;
    let closed = gauss_sum_closed(a.a, a.b, &q)?;
    let rec = GaussResult { q: a.q, a: a.a, b: a.b, direct, closed, abs_diff: (direct - closed).norm() };
    let plain = format!(
        "direct  {}\nclosed  {}\n|diff|  {:e}",
        complex(direct),
        complex(closed),
        rec.abs_diff
    );
    Ok(Outcome::new(&[rec], plain))
}

pub fn discrepancy_cmd(a: &DiscrepancyArgs) -> Res {
    let q = Modulus::prime(a.q)?;
    let primes = table_for(a.p_max)?;
    let rs = build_root_set(&q, a.lambda, a.p_max, &primes)?;
    let r = discrepancy(&rs);
    let plain = format!(
        "delta = {}/{} = {}\ninterval [{}, {}] holds {} of {} roots",
        r.delta_numerator,
        r.denominator,
        format_real(r.delta),
        r.interval.start,
        r.interval.end,
        r.count_in_interval,
        rs.len()
    );
    Ok(Outcome::new(&[r], plain))
}

pub fn maxlambda(a: &MaxLambdaArgs) -> Res {
    let q = Modulus::prime(a.q)?;
    let primes = table_for(a.p_max)?;
    let s = strategy(&a.strategy);
    let (lambda_star, report) = max_discrepancy_over_lambda_with(&q, a.p_max, &primes, s, a.strategy.full_threshold)?;
    let plain = format!(
        "lambda* = {lambda_star}\ndelta = {}/{} = {}\ninterval [{}, {}]",
        report.delta_numerator,
        report.denominator,
        format_real(report.delta),
        report.interval.start,
        report.interval.end
    );
    let rec = MaxLambdaResult { q: a.q, lambda_star, strategy: s, report };
    Ok(Outcome::new(&[rec], plain).seed(s.seed()))
}

fn sum_plain(s: &SumValue) -> String {
    format!(
        "value   {}\n|value| {}\nterms   {}\ntrivial {}",
        complex(s.value),
        format_real(s.value.norm()),
        s.terms,
        format_real(s.trivial_bound)
    )
}

pub fn weyl(a: &WeylArgs) -> Res {
    let q = Modulus::prime(a.q)?;
    let primes = table_for(a.p_max)?;
    let s = if a.mangoldt {
        mangoldt_sum(&q, a.h, a.p_max, &primes)?
    } else {
        weyl_sum_s(&q, a.h, a.p_max, &primes)?
    };
    Ok(Outcome::new(&[s], sum_plain(&s)))
}

pub fn bilinear(a: &BilinearArgs) -> Res {
    let q = Modulus::new(a.q)?;
    let (alpha, beta) = match a.weights {
        WeightKind::Ones => (WeightVector::ones(a.m), WeightVector::ones(a.n)),
        WeightKind::Random => (
            WeightVector::random_phases(a.m, a.seed),
            WeightVector::random_phases(a.n, a.seed.wrapping_add(1)),
        ),
    };
    let s = bilinear_w_with(&q, a.a, a.h, &alpha, &beta, a.allow_wrap)?;
    let seed = (a.weights == WeightKind::Random).then_some(a.seed);
    Ok(Outcome::new(&[s], sum_plain(&s)).seed(seed))
}

pub fn incomplete(a: &IncompleteArgs) -> Res {
    let q = Modulus::new(a.q)?;
    let r = incomplete_sqrt_sum(&q, a.a, a.h, a.w)?;
    let plain = format!("{}\nratio   {}", sum_plain(&r.sum), format_real(r.ratio));
    Ok(Outcome::new(&[r], plain))
}

pub fn bounds(a: &BoundsArgs) -> Res {
    let tb = theorem_bound(a.p_max, a.q_max)?;
    let optimized = optimized_parameters(a.p_max, a.q_max)?;
    let m = a.m.unwrap_or_else(|| a.q_max.sqrt());
    let n = a.n.unwrap_or_else(|| a.q_max.sqrt());
    if !(m >= 1.0 && n >= 1.0 && m.is_finite() && n.is_finite()) {
        return Err(invalid(format!("M and N must be at least 1, got M = {m}, N = {n}")));
    }
    let (o1, o2) = bounds_old(m, n, a.q_max);
    let rec = BoundsResult {
        p_max: a.p_max,
        q_max: a.q_max,
        theorem_bound: tb,
        optimized,
        m,
        n,
        bound_b: bound_b(m, n, a.q_max),
        bounds_old: [o1, o2],
    };
    let plain = format!(
        "theorem bound  {}\nL S U          {} {} {}\nB(M,N,Q)       {}\nolder bounds   {} {}",
        format_real(tb),
        format_real(optimized.l),
        format_real(optimized.s),
        format_real(optimized.u),
        format_real(rec.bound_b),
        format_real(o1),
        format_real(o2)
    );
    Ok(Outcome::new(&[rec], plain))
}

pub fn hb_verify(a: &HbArgs) -> Res {
    let params = match a.z {
        Some(z) => HBParams::new(a.j, z, a.n_max)?,
        None => HBParams::with_natural_cutoff(a.j, a.n_max)?,
    };
    let max_deviation = verify_hb_range(&params)?;
    let rec = HbResult { params, validity_limit: params.validity_limit(), max_deviation };
    let plain = format!(
        "J = {}, Z = {}, n <= {}\nmax deviation {:e}",
        params.j, params.z, params.n_max, max_deviation
    );
    Ok(Outcome::new(&[rec], plain))
}

fn row_cells(r: &SweepRow) -> Vec<String> {
    vec![
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

fn header(h: &[&str]) -> Vec<String> {
    h.iter().map(|s| s.to_string()).collect()
}

pub fn avg(a: &AvgArgs) -> Res {
    let p = a.p_max.unwrap_or(a.q_max);
    let primes = table_for(a.q_max)?;
    let s = strategy(&a.strategy);
    let r = avg_max_discrepancy_with(p, a.q_max, filter(&a.filter)?, s, &primes, a.strategy.full_threshold)?;
    let plain = format!(
        "P = {}, Q = {}, {} primes q\naverage {}\nbound   {}\nratio   {}",
        format_real(r.p),
        format_real(r.q_max),
        r.rows.len(),
        format_real(r.average),
        format_real(r.bound),
        format_real(r.ratio)
    );
    let table = Table { header: header(&SWEEP_HEADER), rows: r.rows.iter().map(row_cells).collect() };
    Ok(Outcome::new(&[r], plain).table(table).seed(s.seed()).note(Q2_NOTE))
}

pub fn charavg(a: &CharAvgArgs) -> Res {
    let p = a.p_max.unwrap_or(a.q_max);
    let primes = table_for(a.q_max)?;
    let r = avg_char_deviation(p, a.q_max, &primes)?;
    let plain = format!(
        "{} primes q\navg |N_q - pi/2|  {}  (/ P^1/2: {})\nsecond moment     {}  (/ PQ: {})",
        r.primes_used,
        format_real(r.avg_abs_dev),
        format_real(r.dev_ratio),
        format_real(r.second_moment),
        format_real(r.second_ratio)
    );
    Ok(Outcome::new(&[r], plain).note(Q2_NOTE))
}

pub fn spacings(a: &SpacingArgs) -> Res {
    let q = Modulus::prime(a.q)?;
    let primes = table_for(a.q as f64)?;
    let h = spacing_histogram(&q, a.n_max, a.bins, &primes)?;
    let mut plain = format!(
        "{} points ({} collisions), {} gaps, sup distance {}\n",
        h.points,
        h.collisions,
        h.gaps,
        format_real(h.sup_distance)
    );
    for (i, c) in h.counts.iter().enumerate() {
        let lo = i as f64 * h.bin_width;
        let _ = writeln!(plain, "{:>8} {c}", format_real(lo));
    }
    let _ = write!(plain, "overflow {}", h.overflow);
    let table = Table {
        header: header(&["bin_start", "bin_end", "count"]),
        rows: h
            .counts
            .iter()
            .enumerate()
            .map(|(i, c)| {
                vec![
                    format_real(i as f64 * h.bin_width),
                    format_real((i + 1) as f64 * h.bin_width),
                    c.to_string(),
                ]
            })
            .collect(),
    };
    Ok(Outcome::new(&[h], plain).table(table))
}

pub fn sweep(a: &SweepArgs, out: Option<&PathBuf>) -> Res {
    let output = out.ok_or_else(|| CliError::Usage("sweep needs --out for its CSV table".into()))?;
    let s = strategy(&a.strategy);
    let config = SweepConfig {
        q_values: a.q_values.clone(),
        p_values: a.p_values.clone(),
        strategy: s,
        filter: filter(&a.filter)?,
        full_threshold: a.strategy.full_threshold,
        output: output.clone(),
    };
    let r = run_sweep(&config)?;
    let mut plain = String::new();
    for c in &r.cells {
        let _ = writeln!(
            plain,
            "P = {:<10} Q = {:<10} average {:<14} ratio {}",
            format_real(c.p),
            format_real(c.q_max),
            format_real(c.average),
            format_real(c.ratio)
        );
    }
    match &r.fit {
        Some(f) => {
            let _ = write!(plain, "slope {} (r^2 {})", format_real(f.slope), format_real(f.r_squared));
        }
        None => plain.push_str("no fit (fewer than three distinct Q)"),
    }
    let table = Table {
        header: header(&SUMMARY_HEADER),
        rows: r
            .cells
            .iter()
            .map(|c| {
                let v = serde_json::to_value(c).expect("cells serialize");
                SUMMARY_HEADER.iter().map(|k| cell(&v[*k])).collect()
            })
            .collect(),
    };
    let rec = SweepReport {
        output: config.output.clone(),
        summary: config.summary_path(),
        fit_file: config.fit_path(),
        rows: r.rows.len(),
        resumed_cells: r.resumed_cells,
        cells: r.cells,
        fit: r.fit,
    };
    Ok(Outcome::new(&[rec], plain).table(table).seed(s.seed()).note(Q2_NOTE))
}

/// Runs the self-checks; the outcome is returned even when some fail.
pub fn verify() -> Result<(Outcome, bool), CliError> {
    let outcomes = checks::run_all()?;
    let ok = outcomes.iter().all(|c| c.passed);
    let mut plain = String::new();
    for c in &outcomes {
        let _ = writeln!(
            plain,
            "[{}] {} ({} cases){}",
            if c.passed { "ok" } else { "FAILED" },
            c.name,
            c.cases,
            if c.detail.is_empty() { String::new() } else { format!(": {}", c.detail) }
        );
    }
    Ok((Outcome::new(&outcomes, plain), ok))
}
