use crate::arith::{e_q, mul_mod, CompensatedSum};
use crate::error::{invalid, Result};

/// `3·(1/(H+1) + (1/N)·Σ_{h ≤ H} |S_h|/h)` where `partial_sums[h-1] = |S_h|`.
pub fn erdos_turan_bound(partial_sums: &[f64], n: usize, h: usize) -> Result<f64> {
    if h == 0 || n == 0 {
        return Err(invalid(format!("H and N must be positive (H={h}, N={n})")));
    }
    if partial_sums.len() != h {
        return Err(invalid(format!("expected {h} partial sums, got {}", partial_sums.len())));
    }
    if let Some(bad) = partial_sums.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
        return Err(invalid(format!("partial sums must be finite and non-negative, got {bad}")));
    }
    let tail = crate::arith::sum_f64(partial_sums.iter().enumerate().map(|(i, s)| s / (i + 1) as f64));
    Ok(3.0 * (1.0 / (h as f64 + 1.0) + tail / n as f64))
}

/// `sup_γ |#{ξ_n < γ} − γN| / N` for points in `[0, 1)`, computed exactly
/// from the sorted sample. Empty input has discrepancy 0.
pub fn star_discrepancy(points: &[f64]) -> f64 {
    let mut xs = points.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut worst = 0.0f64;
    let mut i = 0;
    while i < xs.len() {
        let v = xs[i];
        let below = i as f64 / n;
        let mut j = i;
        while j < xs.len() && xs[j] == v {
            j += 1;
        }
        let upto = j as f64 / n;
        worst = worst.max((v - below).abs()).max((upto - v).abs());
        i = j;
    }
    worst
}

/// `|Σ_x e_q(hx)|` for `h = 1..=H` over residues `x`, phases reduced in
/// integers first.
pub fn root_exponential_sums(roots: &[u64], q: u64, h_max: usize) -> Vec<f64> {
    (1..=h_max as u64)
        .map(|h| {
            let mut acc = CompensatedSum::new();
            for &x in roots {
                acc.add(e_q(mul_mod(h % q, x % q, q), q));
            }
            acc.value().norm()
        })
        .collect()
}
