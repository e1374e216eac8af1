use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest limit [`primes_up_to`] accepts without an explicit budget.
pub const DEFAULT_SIEVE_BUDGET: u64 = 1_000_000_000;

/// Odd numbers covered by one sieve segment.
const SEGMENT_ODDS: usize = 1 << 16;

/// All primes up to `limit`, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `π(x)` for real `x ≤ limit`.
    pub fn pi(&self, x: f64) -> usize {
        self.up_to(x).len()
    }

    /// The primes `p ≤ x`.
    pub fn up_to(&self, x: f64) -> &[u64] {
        if x < 2.0 {
            return &[];
        }
        let cut = x.floor() as u64;
        let end = self.primes.partition_point(|&p| p <= cut);
        &self.primes[..end]
    }

    /// Primes in `[lo, hi]`.
    pub fn range(&self, lo: u64, hi: u64) -> &[u64] {
        let a = self.primes.partition_point(|&p| p < lo);
        let b = self.primes.partition_point(|&p| p <= hi);
        &self.primes[a..b.max(a)]
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }

    /// Errors unless the table reaches `x`.
    pub fn require_covers(&self, x: f64) -> Result<()> {
        if x > self.limit as f64 + 0.5 && x.floor() as u64 > self.limit {
            return Err(invalid(format!(
                "prime table only reaches {}, need {}",
                self.limit, x
            )));
        }
        Ok(())
    }
}

pub fn primes_up_to(limit: u64) -> Result<PrimeTable> {
    primes_up_to_with_budget(limit, DEFAULT_SIEVE_BUDGET)
}

/// Segmented sieve of Eratosthenes over odd numbers.
pub fn primes_up_to_with_budget(limit: u64, budget: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(invalid(format!("sieve limit must be at least 2, got {limit}")));
    }
    if limit > budget {
        return Err(Error::Budget(format!(
            "sieve limit {limit} exceeds the configured budget {budget}"
        )));
    }

    let root = isqrt(limit);
    let base = simple_odd_sieve(root);

    let mut primes = Vec::with_capacity(estimate_pi(limit));
    primes.push(2);

    // segment k covers the odd numbers lo, lo+2, ..., lo + 2*(SEGMENT_ODDS-1)
    let mut composite = vec![false; SEGMENT_ODDS];
    let mut lo = 3u64;
    while lo <= limit {
        let span = (((limit - lo) / 2 + 1) as usize).min(SEGMENT_ODDS);
        composite[..span].fill(false);
        let hi = lo + 2 * (span as u64 - 1);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut start = p * p;
            if start < lo {
                start = lo.div_ceil(p) * p;
                if start % 2 == 0 {
                    start += p;
                }
            }
            let mut idx = ((start - lo) / 2) as usize;
            while idx < span {
                composite[idx] = true;
                idx += p as usize;
            }
        }
        primes.extend(
            composite[..span]
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| lo + 2 * i as u64),
        );
        lo = hi + 2;
    }
    Ok(PrimeTable { limit, primes })
}

/// Odd primes up to `n` by a plain sieve; only used for the base primes.
fn simple_odd_sieve(n: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    let n = n as usize;
    let mut is_comp = vec![false; n + 1];
    let mut out = Vec::new();
    let mut i = 3;
    while i <= n {
        if !is_comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                is_comp[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let n128 = n as u128;
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n128 {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n128 {
        r += 1;
    }
    r as u64
}

fn estimate_pi(n: u64) -> usize {
    if n < 100 {
        return 32;
    }
    let x = n as f64;
    (1.1 * x / x.ln()) as usize
}
