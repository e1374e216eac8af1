use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{legendre, sum_f64, Modulus, PrimeTable};
use crate::error::{invalid, Result};
use crate::expsums::theorem_bound;
use crate::roots::{max_discrepancy_over_lambda_with, residue_prime_count, LambdaStrategy, DEFAULT_FULL_LAMBDA_THRESHOLD};

/// Which primes `q ≤ Q` enter an average. `q = 2` never does.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeRange {
    /// Every odd prime `q ≤ Q`.
    All,
    /// Odd primes in `(Q/2, Q]`.
    Dyadic,
    /// Odd primes in `[lo, hi] ∩ [3, Q]`.
    Range { lo: u64, hi: u64 },
}

impl PrimeRange {
    /// The odd primes selected below `q_max`, increasing.
    pub fn select<'a>(&self, q_max: f64, primes: &'a PrimeTable) -> Result<&'a [u64]> {
        primes.require_covers(q_max)?;
        let top = q_max.floor() as u64;
        let (lo, hi) = match *self {
            PrimeRange::All => (3, top),
            PrimeRange::Dyadic => ((q_max / 2.0).floor() as u64 + 1, top),
            PrimeRange::Range { lo, hi } => (lo.max(3), hi.min(top)),
        };
        let lo = lo.max(3);
        let qs = if lo > hi { &[][..] } else { primes.range(lo, hi) };
        if qs.is_empty() {
            return Err(invalid(format!("no odd prime q in the selected range up to Q = {q_max}")));
        }
        Ok(qs)
    }
}

/// One prime's contribution to an averaged sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub q: u64,
    pub lambda_star: u64,
    /// `q·Δ`, exact.
    pub delta_num: u64,
    pub delta_den: u64,
    pub n_q: u64,
    pub char_sum: i64,
    pub pi_p: u64,
    /// `theorem_bound(P, Q)` of the cell this row belongs to.
    pub bound: f64,
    /// `Δ / bound`.
    pub ratio: f64,
    pub seed: Option<u64>,
}

impl SweepRow {
    pub fn delta(&self) -> f64 {
        self.delta_num as f64 / self.delta_den as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxDiscrepancyAverage {
    pub p: f64,
    pub q_max: f64,
    /// `(1/Q)·Σ_q max_λ Δ_{λ,q}(P)`.
    pub average: f64,
    pub bound: f64,
    pub ratio: f64,
    pub rows: Vec<SweepRow>,
}

pub fn avg_max_discrepancy(
    p: f64,
    q_max: f64,
    filter: PrimeRange,
    strategy: LambdaStrategy,
    primes: &PrimeTable,
) -> Result<MaxDiscrepancyAverage> {
    avg_max_discrepancy_with(p, q_max, filter, strategy, primes, DEFAULT_FULL_LAMBDA_THRESHOLD)
}

/// As [`avg_max_discrepancy`] with an explicit cap on `q` for full
/// enumeration over `λ`.
pub fn avg_max_discrepancy_with(
    p: f64,
    q_max: f64,
    filter: PrimeRange,
    strategy: LambdaStrategy,
    primes: &PrimeTable,
    full_threshold: u64,
) -> Result<MaxDiscrepancyAverage> {
    if !(p >= 2.0) {
        return Err(invalid(format!("P must be at least 2, got {p}")));
    }
    if p > q_max {
        return Err(invalid(format!("P = {p} exceeds Q = {q_max}")));
    }
    let qs = filter.select(q_max, primes)?;
    primes.require_covers(p)?;
    let bound = theorem_bound(p, q_max)?;
    let rows = qs
        .par_iter()
        .map(|&q| {
            let m = Modulus::prime(q)?;
            let (lambda_star, report) = max_discrepancy_over_lambda_with(&m, p, primes, strategy, full_threshold)?;
            let (n_q, char_sum) = residue_prime_count(&m, p, primes)?;
            let delta = report.value();
            Ok(SweepRow {
                q,
                lambda_star,
                delta_num: report.delta_numerator,
                delta_den: report.denominator,
                n_q: n_q as u64,
                char_sum,
                pi_p: report.pi_p,
                bound,
                ratio: delta / bound,
                seed: strategy.seed(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let average = sum_f64(rows.iter().map(SweepRow::delta)) / q_max;
    Ok(MaxDiscrepancyAverage {
        p,
        q_max,
        average,
        bound,
        ratio: average / bound,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharDeviation {
    pub p: f64,
    pub q_max: f64,
    /// `(1/Q)·Σ_q |N_q(P) − π(P)/2|`.
    pub avg_abs_dev: f64,
    /// `Σ_q |Σ_{p ≤ P} (p/q)|²`.
    pub second_moment: f64,
    /// `avg_abs_dev / P^{1/2}`.
    pub dev_ratio: f64,
    /// `second_moment / (P·Q)`.
    pub second_ratio: f64,
    pub primes_used: usize,
}

/// Averages of the quadratic character over primes, `q` running over odd
/// primes up to `Q` (`q = 2` is skipped).
pub fn avg_char_deviation(p: f64, q_max: f64, primes: &PrimeTable) -> Result<CharDeviation> {
    if !(p >= 0.0 && q_max >= 0.0) {
        return Err(invalid(format!("P and Q must be non-negative, got P = {p}, Q = {q_max}")));
    }
    if p > q_max {
        return Err(invalid(format!("P = {p} exceeds Q = {q_max}")));
    }
    primes.require_covers(q_max)?;
    let ps = primes.up_to(p);
    let half_pi = ps.len() as f64 / 2.0;
    let qs: Vec<u64> = primes.up_to(q_max).iter().copied().filter(|&q| q > 2).collect();
    let per_q: Vec<(f64, f64)> = qs
        .par_iter()
        .map(|&q| {
            let (mut n, mut s) = (0i64, 0i64);
            for &pp in ps {
                let c = legendre(pp, q) as i64;
                s += c;
                n += (c == 1) as i64;
            }
            ((n as f64 - half_pi).abs(), (s * s) as f64)
        })
        .collect();
    let (avg_abs_dev, second_moment) = if q_max > 0.0 {
        (sum_f64(per_q.iter().map(|t| t.0)) / q_max, sum_f64(per_q.iter().map(|t| t.1)))
    } else {
        (0.0, 0.0)
    };
    let dev_bound = p.sqrt();
    let second_bound = p * q_max;
    Ok(CharDeviation {
        p,
        q_max,
        avg_abs_dev,
        second_moment,
        dev_ratio: if dev_bound > 0.0 { avg_abs_dev / dev_bound } else { 0.0 },
        second_ratio: if second_bound > 0.0 { second_moment / second_bound } else { 0.0 },
        primes_used: qs.len(),
    })
}
