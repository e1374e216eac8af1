use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::WeightVector;
use crate::arith::{e_q, gcd, mul_mod, sqrt_mod, CompensatedSum, Modulus, PrimeTable, SquareRootTable};
use crate::error::{invalid, Error, Result};

/// A computed exponential sum with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumValue {
    pub value: Complex64,
    /// Number of exponential terms added.
    pub terms: u64,
    /// Number of square-root extractions performed.
    pub kernel_evals: u64,
    /// Sum of the moduli of all terms; `|value|` never exceeds it.
    pub trivial_bound: f64,
}

/// `Σ_{x² ≡ r} e_q(hx)` for the roots of one residue.
#[inline]
fn root_phase_sum<I: IntoIterator<Item = u64>>(roots: I, h: u64, q: u64, acc: &mut CompensatedSum) -> u64 {
    let mut k = 0;
    for x in roots {
        acc.add(e_q(mul_mod(h, x, q), q));
        k += 1;
    }
    k
}

/// `S_q(h, P) = Σ_{p ≤ P} Σ_{x² ≡ p} e_q(hx)`.
pub fn weyl_sum_s(q: &Modulus, h: u64, p_max: f64, primes: &PrimeTable) -> Result<SumValue> {
    q.require_prime()?;
    let n = q.get();
    let h = nonzero(h, n)?;
    primes.require_covers(p_max)?;
    let mut acc = CompensatedSum::new();
    let (mut terms, mut evals) = (0, 0);
    for &p in primes.up_to(p_max) {
        let roots = sqrt_mod(p % n, q)?;
        evals += 1;
        terms += root_phase_sum(roots, h, n, &mut acc);
    }
    Ok(SumValue {
        value: acc.value(),
        terms,
        kernel_evals: evals,
        trivial_bound: terms as f64,
    })
}

/// `Σ_{k ≤ T} Λ(k) Σ_{x² ≡ k} e_q(hx)`; a `k ≡ 0` term contributes `Λ(k)`
/// through the root `x = 0`.
pub fn mangoldt_sum(q: &Modulus, h: u64, t: f64, primes: &PrimeTable) -> Result<SumValue> {
    q.require_prime()?;
    let n = q.get();
    let h = nonzero(h, n)?;
    primes.require_covers(t)?;
    let mut acc = CompensatedSum::new();
    let (mut terms, mut evals) = (0, 0);
    let mut trivial = Vec::new();
    let cut = if t < 1.0 { 0 } else { t.floor() as u64 };
    for &p in primes.up_to(t) {
        let weight = (p as f64).ln();
        let mut pk = p;
        loop {
            let roots = sqrt_mod(pk % n, q)?;
            evals += 1;
            let mut part = CompensatedSum::new();
            let k = root_phase_sum(roots, h, n, &mut part);
            acc.add(part.value() * weight);
            terms += k;
            trivial.push(weight * k as f64);
            match pk.checked_mul(p) {
                Some(next) if next <= cut => pk = next,
                _ => break,
            }
        }
    }
    Ok(SumValue {
        value: acc.value(),
        terms,
        kernel_evals: evals,
        trivial_bound: crate::arith::sum_f64(trivial),
    })
}

/// Finds square roots modulo odd `q`: exhaustive table for `q ≤ 10^6`,
/// Tonelli–Shanks for larger primes.
enum RootSource {
    Table(SquareRootTable),
    Prime(Modulus),
}

impl RootSource {
    fn new(q: &Modulus) -> Result<Self> {
        if q.get() <= SquareRootTable::MAX_MODULUS {
            Ok(RootSource::Table(SquareRootTable::new(q)?))
        } else if q.is_prime() {
            Ok(RootSource::Prime(*q))
        } else {
            Err(Error::Budget(format!(
                "roots modulo composite q are found exhaustively only for q ≤ {}",
                SquareRootTable::MAX_MODULUS
            )))
        }
    }

    fn phase_sum(&self, r: u64, h: u64, acc: &mut CompensatedSum) -> Result<u64> {
        Ok(match self {
            RootSource::Table(t) => {
                let q = t.modulus();
                root_phase_sum(t.roots(r).iter().map(|&x| x as u64), h, q, acc)
            }
            RootSource::Prime(m) => root_phase_sum(sqrt_mod(r % m.get(), m)?, h, m.get(), acc),
        })
    }
}

/// `W_{a,q}(α, β; h, M, N) = Σ*_m Σ*_n α_m β_n Σ_{x² ≡ amn} e_q(hx)`.
pub fn bilinear_w(q: &Modulus, a: u64, h: u64, alpha: &WeightVector, beta: &WeightVector) -> Result<SumValue> {
    bilinear_w_with(q, a, h, alpha, beta, false)
}

/// As [`bilinear_w`]; `allow_wrap` admits weight vectors longer than `q`.
pub fn bilinear_w_with(
    q: &Modulus,
    a: u64,
    h: u64,
    alpha: &WeightVector,
    beta: &WeightVector,
    allow_wrap: bool,
) -> Result<SumValue> {
    let n = q.get();
    let a = q.unit(a)?;
    let h = q.unit(h)?;
    if !allow_wrap && (alpha.len() as u64 > n || beta.len() as u64 > n) {
        return Err(invalid(format!(
            "weights of length {} and {} exceed the modulus {n}",
            alpha.len(),
            beta.len()
        )));
    }
    let roots = RootSource::new(q)?;
    let mut acc = CompensatedSum::new();
    let (mut terms, mut evals) = (0u64, 0u64);
    let mut trivial = Vec::new();
    for (mi, &am) in alpha.values().iter().enumerate() {
        let m = mi as u64 + 1;
        if am == Complex64::new(0.0, 0.0) || gcd(m % n, n) != 1 {
            continue;
        }
        let am_res = mul_mod(a, m % n, n);
        for (ni, &bn) in beta.values().iter().enumerate() {
            let nn = ni as u64 + 1;
            if gcd(nn % n, n) != 1 {
                continue;
            }
            let mut part = CompensatedSum::new();
            let k = roots.phase_sum(mul_mod(am_res, nn % n, n), h, &mut part)?;
            evals += 1;
            terms += k;
            acc.add(part.value() * am * bn);
            trivial.push((am * bn).norm() * k as f64);
        }
    }
    Ok(SumValue {
        value: acc.value(),
        terms,
        kernel_evals: evals,
        trivial_bound: crate::arith::sum_f64(trivial),
    })
}

/// An incomplete sum together with `|value| / (√q · log q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncompleteSum {
    pub sum: SumValue,
    pub ratio: f64,
}

/// `Σ_{w=1}^{W} Σ_{x² ≡ aw} e_q(hx)` for prime `q` and `1 ≤ W ≤ q`.
pub fn incomplete_sqrt_sum(q: &Modulus, a: u64, h: u64, w: u64) -> Result<IncompleteSum> {
    q.require_prime()?;
    let n = q.get();
    let a = q.unit(a)?;
    let h = q.unit(h)?;
    if w == 0 || w > n {
        return Err(invalid(format!("W must lie in [1, {n}], got {w}")));
    }
    let roots = RootSource::new(q)?;
    let mut acc = CompensatedSum::new();
    let mut terms = 0;
    for k in 1..=w {
        terms += roots.phase_sum(mul_mod(a, k, n), h, &mut acc)?;
    }
    let value = acc.value();
    let nf = n as f64;
    Ok(IncompleteSum {
        sum: SumValue {
            value,
            terms,
            kernel_evals: w,
            trivial_bound: terms as f64,
        },
        ratio: value.norm() / (nf.sqrt() * nf.ln()),
    })
}

fn nonzero(h: u64, q: u64) -> Result<u64> {
    let r = h % q;
    if r == 0 {
        return Err(Error::NotUnit { value: h, modulus: q });
    }
    Ok(r)
}
