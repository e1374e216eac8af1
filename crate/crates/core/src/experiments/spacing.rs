use serde::{Deserialize, Serialize};

use crate::arith::{mul_mod, Modulus, PrimeTable};
use crate::error::{invalid, Result};

/// Upper end of the binned range of normalized gaps.
pub const SPACING_RANGE: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacingHistogram {
    pub q: u64,
    pub n_max: u64,
    /// Distinct points of the union inside `[1, q]`.
    pub points: usize,
    /// Values present both as a prime and as a square.
    pub collisions: usize,
    pub gaps: usize,
    /// Counts of normalized gaps in `[i·w, (i+1)·w)`, `w = range / bins`.
    pub counts: Vec<u64>,
    /// Normalized gaps at or beyond the range.
    pub overflow: u64,
    pub bin_width: f64,
    pub mean_gap: f64,
    /// `max` over bin edges `t` of `|F(t) − (1 − e^{−t})|`, `F` the
    /// empirical distribution of normalized gaps.
    pub sup_distance: f64,
}

/// `⌊q / log q⌋`.
pub fn default_square_count(q: u64) -> u64 {
    (q as f64 / (q as f64).ln()).floor() as u64
}

/// Nearest-neighbour gaps of `{p ≤ q prime} ∪ {n² mod q : n ≤ n_max}`.
pub fn spacing_histogram(q: &Modulus, n_max: Option<u64>, bins: usize, primes: &PrimeTable) -> Result<SpacingHistogram> {
    q.require_prime()?;
    if bins == 0 {
        return Err(invalid("bins must be at least 1"));
    }
    let n = q.get();
    primes.require_covers(n as f64)?;
    let n_max = n_max.unwrap_or_else(|| default_square_count(n));

    let mut is_square = vec![false; n as usize + 1];
    for k in 1..=n_max.min(n) {
        let s = mul_mod(k, k, n);
        if s != 0 {
            is_square[s as usize] = true;
        }
    }
    let mut is_point = is_square.clone();
    let mut collisions = 0;
    for &p in primes.up_to(n as f64) {
        collisions += is_square[p as usize] as usize;
        is_point[p as usize] = true;
    }
    let pts: Vec<u64> = (1..=n).filter(|&x| is_point[x as usize]).collect();
    let raw: Vec<u64> = pts.windows(2).map(|w| w[1] - w[0]).collect();
    if raw.is_empty() {
        return Err(invalid(format!("q = {n} yields fewer than two points")));
    }
    let mean_gap = (pts[pts.len() - 1] - pts[0]) as f64 / raw.len() as f64;

    let width = SPACING_RANGE / bins as f64;
    let mut counts = vec![0u64; bins];
    let mut overflow = 0;
    let mut normalized_sum = 0.0;
    for &g in &raw {
        let t = g as f64 / mean_gap;
        normalized_sum += t;
        let b = (t / width).floor() as usize;
        if b < bins {
            counts[b] += 1;
        } else {
            overflow += 1;
        }
    }
    let total = raw.len() as f64;
    let mut below = 0u64;
    let mut sup_distance = 0.0f64;
    for (i, &c) in counts.iter().enumerate() {
        below += c;
        let t = (i + 1) as f64 * width;
        sup_distance = sup_distance.max((below as f64 / total - (1.0 - (-t).exp())).abs());
    }
    Ok(SpacingHistogram {
        q: n,
        n_max,
        points: pts.len(),
        collisions,
        gaps: raw.len(),
        counts,
        overflow,
        bin_width: width,
        mean_gap: normalized_sum / total,
        sup_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    #[test]
    fn eleven() {
        let t = primes_up_to(100).unwrap();
        let h = spacing_histogram(&Modulus::prime(11).unwrap(), Some(4), 5, &t).unwrap();
        // {1,2,3,4,5,7,9,11}
        assert_eq!((h.points, h.gaps, h.collisions), (8, 7, 1));
        assert!((h.mean_gap - 1.0).abs() < 1e-9);
        assert_eq!(h.counts.iter().sum::<u64>() + h.overflow, 7);
        // gaps 1,1,1,1,2,2,2 over mean 10/7: 0.7 → bin 0, 1.4 → bin 1
        assert_eq!(h.counts, vec![4, 3, 0, 0, 0]);
        assert!(spacing_histogram(&Modulus::prime(11).unwrap(), None, 0, &t).is_err());
    }

    #[test]
    fn mean_is_one() {
        let t = primes_up_to(20_000).unwrap();
        for q in [101u64, 1009, 19_997] {
            let h = spacing_histogram(&Modulus::prime(q).unwrap(), None, 50, &t).unwrap();
            assert!((h.mean_gap - 1.0).abs() < 1e-9);
            assert!(h.sup_distance >= 0.0 && h.sup_distance <= 1.0);
        }
    }
}
