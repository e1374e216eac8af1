//! Root sets of `x² ≡ λp (mod q)` over primes `p ≤ P` and their exact
//! discrepancy against the main term `(X/q)·π(P)`.
//!
//! Discrepancies are kept as integers scaled by `q`. With
//! `F(t) = q·C(t) − π(P)·t`, where `C(t)` counts roots in `[1, t]`, the scaled
//! deviation of the interval `[Y+1, Y+X]` is `F(Y+X) − F(Y)`, so the scaled
//! discrepancy is simply `max F − min F` over `t ∈ [0, q−1]`.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, legendre, mul_mod, smallest_non_residue, sqrt_mod, Modulus, PrimeTable};
use crate::error::{invalid, Error, Result};

/// Largest prime `q` for which full enumeration over `λ` is allowed by default.
pub const DEFAULT_FULL_LAMBDA_THRESHOLD: u64 = 100_000;

/// Sorted solutions `x ∈ [1, q−1]` of `x² ≡ λp (mod q)`, `p ≤ P` prime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub q: Modulus,
    pub lambda: u64,
    pub p_max: f64,
    pub roots: Vec<u64>,
    /// Primes `p ≤ P`, `p ≢ 0 (mod q)`, for which `λp` is a quadratic residue.
    pub n_residue_primes: usize,
    /// `π(P)`.
    pub pi_p: usize,
}

impl RootSet {
    pub fn modulus(&self) -> u64 {
        self.q.get()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.roots.binary_search(&x).is_ok()
    }
}

/// Builds the root set. Distinct primes in the same class modulo `q` (only
/// possible when `P ≥ q`) contribute a single root pair.
pub fn build_root_set(q: &Modulus, lambda: u64, p_max: f64, primes: &PrimeTable) -> Result<RootSet> {
    q.require_prime()?;
    let n = q.get();
    if lambda == 0 || lambda >= n {
        return Err(invalid(format!("lambda must lie in [1, {}], got {lambda}", n - 1)));
    }
    if p_max < 2.0 {
        return Err(invalid(format!("P must be at least 2, got {p_max}")));
    }
    primes.require_covers(p_max)?;
    let ps = primes.up_to(p_max);

    let mut classes: Vec<u64> = ps
        .iter()
        .filter(|&&p| p % n != 0)
        .map(|&p| mul_mod(lambda, p % n, n))
        .collect();
    let n_residue_primes = classes.iter().filter(|&&c| legendre(c, n) == 1).count();
    classes.sort_unstable();
    classes.dedup();

    let mut roots = Vec::with_capacity(2 * classes.len());
    for c in classes {
        roots.extend(sqrt_mod(c, q)?);
    }
    roots.sort_unstable();
    Ok(RootSet {
        q: *q,
        lambda,
        p_max,
        roots,
        n_residue_primes,
        pi_p: ps.len(),
    })
}

/// `T_{λ,q}(P; X, Y)`: roots in `[Y+1, Y+X]`.
pub fn count_t(rs: &RootSet, x: u64, y: u64) -> Result<usize> {
    let n = rs.modulus();
    if x == 0 || y.checked_add(x).map_or(true, |end| end > n - 1) {
        return Err(invalid(format!(
            "interval [{}, {}] is not inside [1, {}]",
            y + 1,
            y.saturating_add(x),
            n - 1
        )));
    }
    Ok(count_in(&rs.roots, y + 1, y + x))
}

fn count_in(sorted: &[u64], lo: u64, hi: u64) -> usize {
    sorted.partition_point(|&r| r <= hi) - sorted.partition_point(|&r| r < lo)
}

/// Closed interval `[start, end]` of residues; serialized as `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[u64; 2]", into = "[u64; 2]")]
pub struct Interval {
    pub start: u64,
    pub end: u64,
}

impl Interval {
    /// `Y`, the offset in `[Y+1, Y+X]`.
    pub fn y(&self) -> u64 {
        self.start - 1
    }

    /// `X`, the length.
    pub fn x(&self) -> u64 {
        self.end - self.start + 1
    }
}

impl From<[u64; 2]> for Interval {
    fn from(v: [u64; 2]) -> Self {
        Interval { start: v[0], end: v[1] }
    }
}

impl From<Interval> for [u64; 2] {
    fn from(i: Interval) -> Self {
        [i.start, i.end]
    }
}

/// Exact discrepancy: `Δ = delta_numerator / denominator`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub delta_numerator: u64,
    pub denominator: u64,
    /// A maximizing interval.
    pub interval: Interval,
    pub count_in_interval: u64,
    pub pi_p: u64,
    /// `delta_numerator / denominator`, for convenience only.
    pub delta: f64,
}

impl DiscrepancyReport {
    pub fn value(&self) -> f64 {
        self.delta_numerator as f64 / self.denominator as f64
    }
}

pub fn discrepancy(rs: &RootSet) -> DiscrepancyReport {
    discrepancy_of_sorted(&rs.roots, rs.modulus(), rs.pi_p as u64)
}

/// Discrepancy of an arbitrary strictly increasing set of residues in
/// `[1, q−1]` against the main term `(X/q)·pi`.
pub fn discrepancy_of_sorted(roots: &[u64], q: u64, pi: u64) -> DiscrepancyReport {
    debug_assert!(roots.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(roots.iter().all(|&r| r >= 1 && r < q));
    let (qi, pii) = (q as i128, pi as i128);

    // scan t = 0, r1−1, r1, r2−1, r2, ..., q−1, keeping the first extremum
    let (mut hi, mut hi_t) = (0i128, 0u64);
    let (mut lo, mut lo_t) = (0i128, 0u64);
    for (k, &r) in roots.iter().enumerate() {
        let before = qi * k as i128 - pii * (r as i128 - 1);
        if before < lo {
            lo = before;
            lo_t = r - 1;
        }
        let at = qi * (k as i128 + 1) - pii * r as i128;
        if at > hi {
            hi = at;
            hi_t = r;
        }
    }
    let end_val = qi * roots.len() as i128 - pii * (q as i128 - 1);
    if end_val < lo {
        lo = end_val;
        lo_t = q - 1;
    }

    let numerator = (hi - lo) as u64;
    let (a, b) = (hi_t.min(lo_t), hi_t.max(lo_t));
    let interval = if a == b {
        Interval { start: 1, end: 1 }
    } else {
        Interval { start: a + 1, end: b }
    };
    let count = count_in(roots, interval.start, interval.end) as u64;
    debug_assert_eq!(
        (qi * count as i128 - interval.x() as i128 * pii).unsigned_abs() as u64,
        numerator
    );
    DiscrepancyReport {
        delta_numerator: numerator,
        denominator: q,
        interval,
        count_in_interval: count,
        pi_p: pi,
        delta: numerator as f64 / q as f64,
    }
}

/// How the maximum over `λ ∈ Z_q^×` is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LambdaStrategy {
    /// All `q − 1` units; exact.
    Full,
    /// `k` distinct units drawn with a seeded ChaCha8 stream; a lower bound
    /// on the true maximum.
    Sample { k: usize, seed: u64 },
}

impl LambdaStrategy {
    pub fn seed(&self) -> Option<u64> {
        match self {
            LambdaStrategy::Full => None,
            LambdaStrategy::Sample { seed, .. } => Some(*seed),
        }
    }
}

/// Deterministic generator for modulus `q` under `seed`: one ChaCha8 stream per `q`.
pub fn rng_for(seed: u64, q: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(q);
    rng
}

/// The `λ` values a strategy visits for prime `q`, increasing.
pub fn sampled_lambdas(q: u64, k: usize, seed: u64) -> Vec<u64> {
    let units = (q - 1) as usize;
    if k >= units {
        return (1..q).collect();
    }
    let mut rng = rng_for(seed, q);
    let mut out: Vec<u64> = index::sample(&mut rng, units, k).into_iter().map(|i| i as u64 + 1).collect();
    out.sort_unstable();
    out
}

pub fn max_discrepancy_over_lambda(
    q: &Modulus,
    p_max: f64,
    primes: &PrimeTable,
    strategy: LambdaStrategy,
) -> Result<(u64, DiscrepancyReport)> {
    max_discrepancy_over_lambda_with(q, p_max, primes, strategy, DEFAULT_FULL_LAMBDA_THRESHOLD)
}

/// The maximizing `λ` (smallest on ties) and its report.
pub fn max_discrepancy_over_lambda_with(
    q: &Modulus,
    p_max: f64,
    primes: &PrimeTable,
    strategy: LambdaStrategy,
    full_threshold: u64,
) -> Result<(u64, DiscrepancyReport)> {
    q.require_prime()?;
    if p_max < 2.0 {
        return Err(invalid(format!("P must be at least 2, got {p_max}")));
    }
    primes.require_covers(p_max)?;
    let n = q.get();
    let lambda_star = match strategy {
        LambdaStrategy::Full => {
            if n > full_threshold {
                return Err(Error::Budget(format!(
                    "full enumeration over lambda is limited to q ≤ {full_threshold}, got {n}"
                )));
            }
            if n > u32::MAX as u64 / 2 {
                return Err(Error::Budget(format!("modulus {n} too large for full enumeration")));
            }
            full_scan(n, p_max, primes).1
        }
        LambdaStrategy::Sample { k, seed } => {
            if k == 0 {
                return Err(invalid("sample size must be at least 1"));
            }
            let mut best: Option<(u64, u64)> = None;
            for lambda in sampled_lambdas(n, k, seed) {
                let d = discrepancy(&build_root_set(q, lambda, p_max, primes)?).delta_numerator;
                if best.map_or(true, |(b, _)| d > b) {
                    best = Some((d, lambda));
                }
            }
            best.expect("at least one lambda sampled").1
        }
    };
    let report = discrepancy(&build_root_set(q, lambda_star, p_max, primes)?);
    Ok((lambda_star, report))
}

/// Exact `max_λ q·Δ_{λ,q}(P)` and the smallest maximizing `λ`.
///
/// Root sets for `λ0·μ²` are the dilations `μ·R_{λ0}`, so two base sets
/// (`λ0 = 1` and the smallest non-residue) cover every unit. Each root set
/// is closed under `x ↦ q − x`; with `h = (q−1)/2` and `m` roots in `[1, h]`
/// the walk satisfies `F(q−1−t) = K − F(t)` where `K = 2mq − π(q−1)`, so
/// only the lower half is ever materialized.
fn full_scan(q: u64, p_max: f64, primes: &PrimeTable) -> (u64, u64) {
    let h = ((q - 1) / 2) as usize;
    let ps = primes.up_to(p_max);
    let pi = ps.len() as i64;

    let mut hit = vec![false; q as usize];
    for &p in ps {
        let c = p % q;
        if c != 0 {
            hit[c as usize] = true;
        }
    }
    let mut half_root = vec![0u32; q as usize];
    for x in 1..=h as u64 {
        half_root[mul_mod(x, x, q) as usize] = x as u32;
    }
    let nr = smallest_non_residue(q);
    let mut base_one = Vec::new();
    let mut base_nr = Vec::new();
    for c in 1..q {
        if !hit[c as usize] {
            continue;
        }
        if legendre(c, q) == 1 {
            base_one.push(half_root[c as usize]);
        } else {
            base_nr.push(half_root[mul_mod(nr, c, q) as usize]);
        }
    }

    #[cfg(target_arch = "x86_64")]
    {
        if is_x86_feature_detected!("avx2") && is_x86_feature_detected!("popcnt") && is_x86_feature_detected!("bmi2") {
            // SAFETY: the required CPU features were just detected.
            return unsafe { scan_bases_avx2(q, h, pi, nr, &base_one, &base_nr) };
        }
    }
    scan_bases(q, h, pi, nr, &base_one, &base_nr)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2,popcnt,bmi1,bmi2")]
unsafe fn scan_bases_avx2(q: u64, h: usize, pi: i64, nr: u64, one: &[u32], non: &[u32]) -> (u64, u64) {
    scan_bases(q, h, pi, nr, one, non)
}

/// Walks `λ = λ0·μ²` for both bases and `μ ∈ [1, h]`; the smallest `λ`
/// wins ties.
#[inline(always)]
fn scan_bases(q: u64, h: usize, pi: i64, nr: u64, one: &[u32], non: &[u32]) -> (u64, u64) {
    let q32 = q as u32;
    let mut best = (0u64, u64::MAX);
    for (lambda0, base) in [(1u64, one), (nr, non)] {
        let dense_base;
        let (base, dense) = if base.len() > h / 2 {
            dense_base = complement(base, h);
            (&dense_base[..], true)
        } else {
            (base, false)
        };
        let mut scanner = HalfScanner::with_density(q, h, pi, base.len(), dense);
        let mut cur = base.to_vec();
        let mut ys = vec![0u32; base.len()];
        for mu in 1..=h as u64 {
            // operands stay below q < 2^31; wrapping ops keep these loops
            // vectorized even when overflow checks are on
            if mu > 1 {
                for (c, &b) in cur.iter_mut().zip(base) {
                    let s = c.wrapping_add(b);
                    *c = if s >= q32 { s.wrapping_sub(q32) } else { s };
                }
            }
            for (y, &c) in ys.iter_mut().zip(cur.iter()) {
                *y = c.min(q32.wrapping_sub(c));
            }
            let lambda = mul_mod(lambda0, mul_mod(mu, mu, q), q);
            // a tie only matters when it would lower λ
            let floor = if lambda < best.1 { best.0 } else { best.0 + 1 };
            if let Some(value) = scanner.range_at_least(&ys, floor) {
                if value > best.0 || (value == best.0 && lambda < best.1) {
                    best = (value, lambda);
                }
            }
        }
    }
    best
}

/// `[1, h]` minus a set of distinct half-range representatives.
fn complement(reps: &[u32], h: usize) -> Vec<u32> {
    let mut present = vec![false; h + 1];
    for &y in reps {
        present[y as usize] = true;
    }
    (1..=h as u32).filter(|&y| !present[y as usize]).collect()
}

/// Scaled discrepancy of symmetric root sets given by their half-range
/// representatives `y = min(c, q − c) ∈ [1, h]`.
///
/// The representatives go into a bitmap. A dense set (more than `h/2`
/// representatives) is handled through its complement: the bitmap starts
/// full and each representative toggles its bit off, which works because
/// dilation permutes `[1, h]`. Blocks of 64 positions give cheap enclosures
/// of the walk, and only blocks that could move an extremum are walked bit
/// by bit.
struct HalfScanner {
    q: i64,
    h: usize,
    pi: i64,
    m: i64,
    mask: usize,
    used: usize,
    template: Vec<u64>,
    words: Vec<u64>,
    ranks: Vec<i64>,
}

impl HalfScanner {
    /// `len` is the number of representatives passed on every call; a
    /// dense set is given by its complement.
    fn with_density(q: u64, h: usize, pi: i64, len: usize, dense: bool) -> Self {
        let used = h / 64 + 1;
        let size = used.next_power_of_two();
        let mut template = vec![0u64; size];
        if dense {
            for y in 1..=h {
                template[y >> 6] |= 1 << (y & 63);
            }
        }
        HalfScanner {
            q: q as i64,
            h,
            pi,
            m: if dense { (h - len) as i64 } else { len as i64 },
            mask: size - 1,
            used,
            words: template.clone(),
            template,
            ranks: vec![0; used],
        }
    }

    /// `max F − min F` for the set `{±y}`, or `None` once the value is
    /// provably below `floor`.
    #[inline(always)]
    fn range_at_least(&mut self, ys: &[u32], floor: u64) -> Option<u64> {
        let (q, pi, h, m) = (self.q, self.pi, self.h as i64, self.m);
        let mask = self.mask;
        let words = &mut self.words[..mask + 1];
        for &y in ys {
            words[(y as usize >> 6) & mask] ^= 1u64 << (y & 63);
        }
        let end = q * m - pi * h;
        let k = q * 2 * m - pi * (q - 1);

        // A_w = q·R_w − π(64w − 1), with R_w the number of positions below
        // 64w, is F(64w − 1) whenever that lies in [0, h]. On block w the
        // walk stays within [A_w − 64π, A_{w+1} + 63π].
        let (mut hi, mut lo) = (end.max(0), end.min(0));
        let step = 64 * pi;
        let mut a_w = pi;
        let (mut a_max, mut a_min) = (a_w, a_w);
        for &word in &words[..self.used] {
            a_w += q * word.count_ones() as i64 - step;
            a_max = a_max.max(a_w);
            a_min = a_min.min(a_w);
        }
        debug_assert_eq!(a_w, q * m - pi * (64 * self.used as i64 - 1));
        let ub = hi.max(a_max + 63 * pi);
        let lb = lo.min(a_min - step);
        let bound = ub.max(k - lb) - lb.min(k - ub);
        if (bound as u64) < floor {
            words.copy_from_slice(&self.template);
            return None;
        }

        let mut rank = 0i64;
        for (w, &word) in words[..self.used].iter().enumerate() {
            let at_start = q * rank - pi * (w as i64 * 64 - 1).max(0);
            hi = hi.max(at_start);
            lo = lo.min(at_start);
            self.ranks[w] = rank;
            rank += word.count_ones() as i64;
        }
        for (w, word) in words[..self.used].iter().enumerate() {
            let mut bits = *word;
            if bits == 0 {
                continue;
            }
            let mut rank = self.ranks[w];
            let first = (w as i64 * 64).max(1);
            let last = (w as i64 * 64 + 63).min(h);
            let c = bits.count_ones() as i64;
            if q * (rank + c) - pi * first <= hi && q * rank - pi * (last - 1) >= lo {
                continue;
            }
            while bits != 0 {
                let l = w as i64 * 64 + bits.trailing_zeros() as i64;
                bits &= bits - 1;
                let before = q * rank - pi * (l - 1);
                rank += 1;
                let at = q * rank - pi * l;
                hi = hi.max(at);
                lo = lo.min(before);
            }
        }
        words.copy_from_slice(&self.template);
        let f_max = hi.max(k - lo);
        let f_min = lo.min(k - hi);
        Some((f_max - f_min) as u64)
    }
}

/// `N_q(P)` and `Σ_{p ≤ P} (p/q)`.
pub fn residue_prime_count(q: &Modulus, p_max: f64, primes: &PrimeTable) -> Result<(usize, i64)> {
    q.require_prime()?;
    primes.require_covers(p_max)?;
    let n = q.get();
    let mut count = 0usize;
    let mut char_sum = 0i64;
    for &p in primes.up_to(p_max) {
        let s = legendre(p, n);
        char_sum += s as i64;
        count += (s == 1) as usize;
    }
    Ok((count, char_sum))
}

/// `λμ²` roots are `μ·roots(λ)`; used by tests and the self-check suite.
pub fn dilate(roots: &[u64], mu: u64, q: u64) -> Vec<u64> {
    let mut out: Vec<u64> = roots.iter().map(|&r| mul_mod(r, mu, q)).collect();
    out.sort_unstable();
    out
}

/// `λ⁻¹`, exposed for callers that need to map roots back to prime classes.
pub fn lambda_inverse(lambda: u64, q: u64) -> Option<u64> {
    inv_mod(lambda, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    fn table() -> PrimeTable {
        primes_up_to(1000).unwrap()
    }

    fn m(q: u64) -> Modulus {
        Modulus::prime(q).unwrap()
    }

    /// Every interval, every count, straight from the definition.
    fn brute(roots: &[u64], q: u64, pi: u64) -> u64 {
        let mut best = 0u64;
        for y in 0..q - 1 {
            let mut count = 0u64;
            for end in y + 1..q {
                if roots.contains(&end) {
                    count += 1;
                }
                let x = end - y;
                best = best.max((q as i64 * count as i64 - x as i64 * pi as i64).unsigned_abs());
            }
        }
        best
    }

    #[test]
    fn root_set_examples() {
        let t = table();
        let rs = build_root_set(&m(11), 1, 10.0, &t).unwrap();
        assert_eq!(rs.roots, vec![4, 5, 6, 7]);
        assert_eq!(rs.n_residue_primes, 2);
        assert_eq!(rs.pi_p, 4);
        assert_eq!(build_root_set(&m(11), 7, 10.0, &t).unwrap().roots, vec![4, 5, 6, 7]);
        assert_eq!(build_root_set(&m(7), 1, 2.0, &t).unwrap().roots, vec![3, 4]);
    }

    #[test]
    fn root_set_rejects_bad_lambda_and_short_table() {
        let t = table();
        assert!(build_root_set(&m(11), 0, 10.0, &t).is_err());
        assert!(build_root_set(&m(11), 11, 10.0, &t).is_err());
        assert!(build_root_set(&m(11), 1, 5000.0, &t).is_err());
        assert!(build_root_set(&Modulus::new(15).unwrap(), 1, 10.0, &t).is_err());
    }

    #[test]
    fn count_examples() {
        let rs = build_root_set(&m(11), 1, 10.0, &table()).unwrap();
        assert_eq!(count_t(&rs, 10, 0).unwrap(), 4);
        assert_eq!(count_t(&rs, 4, 3).unwrap(), 4);
        assert_eq!(count_t(&rs, 3, 7).unwrap(), 0);
        assert!(count_t(&rs, 0, 3).is_err());
        assert!(count_t(&rs, 3, 8).is_err());
    }

    #[test]
    fn discrepancy_examples() {
        let t = table();
        let d = discrepancy(&build_root_set(&m(11), 1, 10.0, &t).unwrap());
        assert_eq!((d.delta_numerator, d.denominator), (28, 11));
        assert_eq!(d.interval, Interval { start: 4, end: 7 });
        assert_eq!(d.count_in_interval, 4);

        let rs4 = build_root_set(&m(11), 4, 10.0, &t).unwrap();
        assert_eq!(rs4.roots, vec![1, 3, 8, 10]);
        assert_eq!(discrepancy(&rs4).delta_numerator, 16);

        let empty = discrepancy_of_sorted(&[], 11, 4);
        assert_eq!(empty.delta_numerator, 40);
        assert_eq!(empty.interval, Interval { start: 1, end: 10 });
    }

    #[test]
    fn zero_discrepancy_reports_a_valid_interval() {
        let d = discrepancy_of_sorted(&[], 7, 0);
        assert_eq!(d.delta_numerator, 0);
        assert_eq!(d.interval.x(), 1);
    }

    #[test]
    fn interior_negative_deviation_is_found() {
        // A sparse middle holding two roots beats every root-free gap.
        let q = 31;
        let roots: Vec<u64> = (1..=5).chain([15, 16]).chain(26..=30).collect();
        let d = discrepancy_of_sorted(&roots, q, 10);
        assert_eq!(d.delta_numerator, brute(&roots, q, 10));
        assert_eq!(d.delta_numerator, 200 - 62);
    }

    #[test]
    fn discrepancy_matches_brute_force_small() {
        let t = table();
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            for p in 2..=q {
                for lambda in 1..q {
                    let rs = build_root_set(&m(q), lambda, p as f64, &t).unwrap();
                    let d = discrepancy(&rs);
                    assert_eq!(d.delta_numerator, brute(&rs.roots, q, rs.pi_p as u64), "q={q} P={p} λ={lambda}");
                }
            }
        }
    }

    #[test]
    fn full_scan_matches_per_lambda_enumeration() {
        let t = table();
        for q in [3u64, 5, 7, 11, 13, 17, 29, 41, 97, 101] {
            for p in [2.0, 10.0, q as f64, 3.0 * q as f64] {
                let mut best = (0u64, 0u64);
                for lambda in 1..q {
                    let d = discrepancy(&build_root_set(&m(q), lambda, p, &t).unwrap()).delta_numerator;
                    if d > best.0 {
                        best = (d, lambda);
                    }
                }
                let (lam, rep) = max_discrepancy_over_lambda(&m(q), p, &t, LambdaStrategy::Full).unwrap();
                assert_eq!((rep.delta_numerator, lam), best, "q={q} P={p}");
            }
        }
    }

    #[test]
    fn max_over_lambda_examples() {
        let t = table();
        let (lam, rep) = max_discrepancy_over_lambda(&m(11), 10.0, &t, LambdaStrategy::Full).unwrap();
        assert_eq!(lam, 1);
        assert_eq!(rep.delta_numerator, 28);

        // find a seed whose single draw is λ = 4
        let seed = (0..10_000u64).find(|&s| sampled_lambdas(11, 1, s) == vec![4]).unwrap();
        let (lam, rep) =
            max_discrepancy_over_lambda(&m(11), 10.0, &t, LambdaStrategy::Sample { k: 1, seed }).unwrap();
        assert_eq!((lam, rep.delta_numerator), (4, 16));
    }

    #[test]
    fn full_enumeration_threshold() {
        let t = table();
        let err = max_discrepancy_over_lambda_with(&m(101), 50.0, &t, LambdaStrategy::Full, 100).unwrap_err();
        assert!(matches!(err, Error::Budget(_)));
    }

    #[test]
    fn residue_counts() {
        let t = table();
        assert_eq!(residue_prime_count(&m(11), 10.0, &t).unwrap(), (2, 0));
        assert_eq!(residue_prime_count(&m(3), 2.0, &t).unwrap(), (0, -1));
        assert_eq!(residue_prime_count(&m(7), 2.0, &t).unwrap(), (1, 1));
        for q in [3u64, 5, 7, 11, 101] {
            for p in [2.0, 7.0, 50.0, 200.0] {
                let (nq, cs) = residue_prime_count(&m(q), p, &t).unwrap();
                let pi = t.pi(p) as i64;
                let q_le_p = (q as f64 <= p) as i64;
                assert_eq!(2 * nq as i64, pi - q_le_p + cs);
            }
        }
    }

    #[test]
    fn scaling_by_squares_dilates_roots() {
        let t = table();
        for q in [11u64, 13, 31] {
            for lambda in 1..q {
                let base = build_root_set(&m(q), lambda, q as f64, &t).unwrap();
                for mu in 1..q {
                    let l2 = mul_mod(lambda, mul_mod(mu, mu, q), q);
                    let scaled = build_root_set(&m(q), l2, q as f64, &t).unwrap();
                    assert_eq!(scaled.roots, dilate(&base.roots, mu, q));
                }
            }
        }
    }
}
