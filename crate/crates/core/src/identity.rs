//! The Heath-Brown identity at desk scale.
//!
//! With `M_Z(s) = Σ_{d ≤ Z} μ(d) d^{−s}`, expanding `(1 − ζ M_Z)^J` shows
//!
//! ```text
//! Λ(n) = Σ_{j=1}^{J} (−1)^{j−1} C(J,j) (μ_{≤Z}^{*j} ∗ log ∗ 1^{*(j−1)})(n)
//! ```
//!
//! for every `n ≤ Z^J`. Both evaluators below split each term as an integer
//! kernel `μ_{≤Z}^{*j} ∗ 1^{*(j−1)}` followed by one convolution with `log`.

use serde::{Deserialize, Serialize};

use crate::arith::{mangoldt_table, mobius, mobius_table};
use crate::error::{invalid, Error, Result};

/// Largest verification range accepted by [`verify_hb_range`].
pub const HB_BUDGET: u64 = 1_000_000;

/// Largest number of folds accepted.
pub const MAX_J: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HBParams {
    pub j: u32,
    pub z: u64,
    pub n_max: u64,
}

impl HBParams {
    pub fn new(j: u32, z: u64, n_max: u64) -> Result<Self> {
        let p = HBParams { j, z, n_max };
        p.validate()?;
        Ok(p)
    }

    /// `Z = ⌈n_max^{1/J}⌉`, the smallest cutoff covering the range.
    pub fn with_natural_cutoff(j: u32, n_max: u64) -> Result<Self> {
        if j == 0 {
            return Err(invalid("J must be at least 1"));
        }
        let mut z = (n_max as f64).powf(1.0 / j as f64).round().max(1.0) as u64;
        while z > 1 && pow_sat(z - 1, j) >= n_max {
            z -= 1;
        }
        while pow_sat(z, j) < n_max {
            z += 1;
        }
        HBParams::new(j, z, n_max)
    }

    /// `Z^J`, saturating.
    pub fn validity_limit(&self) -> u64 {
        pow_sat(self.z, self.j)
    }

    fn validate(&self) -> Result<()> {
        if self.j == 0 || self.j > MAX_J {
            return Err(invalid(format!("J must lie in [1, {MAX_J}], got {}", self.j)));
        }
        if self.z == 0 {
            return Err(invalid("Z must be at least 1"));
        }
        if self.n_max == 0 {
            return Err(invalid("n_max must be at least 1"));
        }
        if self.n_max > self.validity_limit() {
            return Err(invalid(format!(
                "n_max = {} exceeds the validity range Z^J = {}",
                self.n_max,
                self.validity_limit()
            )));
        }
        Ok(())
    }
}

fn pow_sat(z: u64, j: u32) -> u64 {
    z.checked_pow(j).unwrap_or(u64::MAX)
}

/// `(−1)^{j−1} C(J, j)` for `j = 1..=J`.
pub fn coefficients(j_max: u32) -> Vec<i64> {
    let mut c = 1i64;
    (1..=j_max as i64)
        .map(|j| {
            c = c * (j_max as i64 - j + 1) / j;
            if j % 2 == 1 {
                c
            } else {
                -c
            }
        })
        .collect()
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Evaluates the identity at a single `n` by convolution over the divisors
/// of `n`.
pub fn lambda_via_hb(n: u64, params: &HBParams) -> Result<f64> {
    params.validate()?;
    if n == 0 || n > params.n_max {
        return Err(invalid(format!("n must lie in [1, {}], got {n}", params.n_max)));
    }
    Ok(evaluate(n, params.j, params.z))
}

fn evaluate(n: u64, j_max: u32, z: u64) -> f64 {
    let divs = divisors(n);
    let idx = |d: u64| divs.binary_search(&d).expect("divisor of n");
    let mu: Vec<i64> = divs
        .iter()
        .map(|&d| if d <= z { mobius(d) as i64 } else { 0 })
        .collect();

    let conv = |cur: &[i64], f: &dyn Fn(usize) -> i64| -> Vec<i64> {
        let mut out = vec![0i64; divs.len()];
        for (a, &da) in divs.iter().enumerate() {
            let fa = f(a);
            if fa == 0 {
                continue;
            }
            for (b, &db) in divs.iter().enumerate() {
                if cur[b] != 0 && (n / da) % db == 0 {
                    out[idx(da * db)] += fa * cur[b];
                }
            }
        }
        out
    };

    let mut total = Vec::with_capacity(j_max as usize);
    let mut mu_power = vec![0i64; divs.len()];
    mu_power[0] = 1;
    for (j, c) in (1..=j_max).zip(coefficients(j_max)) {
        mu_power = conv(&mu_power, &|a| mu[a]);
        let mut kernel = mu_power.clone();
        for _ in 1..j {
            kernel = conv(&kernel, &|_| 1);
        }
        let term = crate::arith::sum_f64(
            divs.iter()
                .zip(&kernel)
                .filter(|(_, &g)| g != 0)
                .map(|(&d, &g)| g as f64 * ((n / d) as f64).ln()),
        );
        total.push(c as f64 * term);
    }
    crate::arith::sum_f64(total)
}

/// Dirichlet convolution of `a` with `μ` restricted to `[1, z]`.
fn conv_mu(a: &[i64], mu: &[i8], z: usize) -> Vec<i64> {
    let n = a.len() - 1;
    let mut out = vec![0i64; n + 1];
    for d in 1..=z.min(n) {
        let m = mu[d] as i64;
        if m == 0 {
            continue;
        }
        for k in 1..=n / d {
            out[d * k] += m * a[k];
        }
    }
    out
}

fn conv_one(a: &[i64]) -> Vec<i64> {
    let n = a.len() - 1;
    let mut out = vec![0i64; n + 1];
    for d in 1..=n {
        if a[d] == 0 {
            continue;
        }
        for k in 1..=n / d {
            out[d * k] += a[d];
        }
    }
    out
}

/// Identity values for all `n ≤ n_max`, via table convolutions.
pub fn hb_table(params: &HBParams) -> Result<Vec<f64>> {
    params.validate()?;
    if params.n_max > HB_BUDGET {
        return Err(Error::Budget(format!(
            "identity verification limited to n_max ≤ {HB_BUDGET}, got {}",
            params.n_max
        )));
    }
    let n = params.n_max as usize;
    let z = params.z.min(params.n_max) as usize;
    let mu = mobius_table(n);
    let ln: Vec<f64> = (0..=n).map(|k| if k == 0 { 0.0 } else { (k as f64).ln() }).collect();

    let mut out = vec![0.0f64; n + 1];
    let mut mu_power = vec![0i64; n + 1];
    mu_power[1] = 1;
    for (j, c) in (1..=params.j).zip(coefficients(params.j)) {
        mu_power = conv_mu(&mu_power, &mu, z);
        let mut kernel = mu_power.clone();
        for _ in 1..j {
            kernel = conv_one(&kernel);
        }
        let mut term = vec![0.0f64; n + 1];
        for d in 1..=n {
            let g = kernel[d];
            if g == 0 {
                continue;
            }
            let g = g as f64;
            for k in 2..=n / d {
                term[d * k] += g * ln[k];
            }
        }
        for (o, t) in out.iter_mut().zip(&term) {
            *o += c as f64 * t;
        }
    }
    Ok(out)
}

/// `max_{n ≤ n_max} |identity(n) − Λ(n)|`.
pub fn verify_hb_range(params: &HBParams) -> Result<f64> {
    let table = hb_table(params)?;
    let lambda = mangoldt_table(params.n_max as usize);
    Ok(table
        .iter()
        .zip(&lambda)
        .skip(1)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
