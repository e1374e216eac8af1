//! A quick self-check suite: small exhaustive comparisons against
//! definitions, run by the command-line `verify` verb.

use serde::{Deserialize, Serialize};

use crate::arith::{gauss_sum_closed, gauss_sum_direct, primes_up_to, sqrt_mod, Modulus, PrimeTable};
use crate::expsums::{erdos_turan_bound, incomplete_sqrt_sum, root_exponential_sums, star_discrepancy, weyl_sum_s};
use crate::identity::{verify_hb_range, HBParams};
use crate::roots::{build_root_set, discrepancy, max_discrepancy_over_lambda, LambdaStrategy};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Number of individual comparisons made.
    pub cases: u64,
    pub detail: String,
}

fn outcome(name: &str, cases: u64, failures: Vec<String>) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        passed: failures.is_empty(),
        cases,
        detail: failures.into_iter().take(3).collect::<Vec<_>>().join("; "),
    }
}

fn odd_primes(t: &PrimeTable, hi: u64) -> impl Iterator<Item = u64> + '_ {
    t.range(3, hi).iter().copied()
}

fn sqrt_exhaustive(t: &PrimeTable) -> Result<CheckOutcome> {
    let (mut cases, mut bad) = (0, Vec::new());
    for q in odd_primes(t, 300) {
        let m = Modulus::prime(q)?;
        let mut roots = vec![Vec::new(); q as usize];
        for x in 0..q {
            roots[(x * x % q) as usize].push(x);
        }
        for a in 0..q {
            cases += 1;
            if sqrt_mod(a, &m)? != roots[a as usize] {
                bad.push(format!("q={q} a={a}"));
            }
        }
    }
    Ok(outcome("sqrt_mod matches exhaustive search", cases, bad))
}

fn gauss_closed_form() -> Result<CheckOutcome> {
    let (mut cases, mut bad) = (0, Vec::new());
    for q in (3..=151).step_by(2) {
        let m = Modulus::new(q)?;
        for a in 1..q {
            if crate::arith::gcd(a, q) != 1 {
                continue;
            }
            for b in [0, 1, q / 2, q - 1] {
                cases += 1;
                let d = gauss_sum_direct(a, b, &m)? - gauss_sum_closed(a, b, &m)?;
                if d.norm() > 1e-8 {
                    bad.push(format!("q={q} a={a} b={b}"));
                }
            }
        }
    }
    Ok(outcome("Gauss sums match the closed form", cases, bad))
}

fn brute_discrepancy(roots: &[u64], q: u64, pi: u64) -> u64 {
    let mut best = 0u64;
    for y in 0..q - 1 {
        let mut count = 0i64;
        for end in y + 1..q {
            count += roots.binary_search(&end).is_ok() as i64;
            let dev = q as i64 * count - (end - y) as i64 * pi as i64;
            best = best.max(dev.unsigned_abs());
        }
    }
    best
}

fn discrepancy_exact(t: &PrimeTable) -> Result<CheckOutcome> {
    let (mut cases, mut bad) = (0, Vec::new());
    for q in odd_primes(t, 43) {
        let m = Modulus::prime(q)?;
        for p in 2..=q {
            let mut best = 0;
            for lambda in 1..q {
                cases += 1;
                let rs = build_root_set(&m, lambda, p as f64, t)?;
                let d = discrepancy(&rs).delta_numerator;
                best = best.max(d);
                if d != brute_discrepancy(&rs.roots, q, rs.pi_p as u64) {
                    bad.push(format!("q={q} P={p} λ={lambda}"));
                }
            }
            let (_, rep) = max_discrepancy_over_lambda(&m, p as f64, t, LambdaStrategy::Full)?;
            if rep.delta_numerator != best {
                bad.push(format!("max over λ, q={q} P={p}"));
            }
        }
    }
    Ok(outcome("discrepancy equals the all-intervals maximum", cases, bad))
}

fn erdos_turan_roots(t: &PrimeTable) -> Result<CheckOutcome> {
    let (mut cases, mut bad) = (0, Vec::new());
    for q in odd_primes(t, 100) {
        let m = Modulus::prime(q)?;
        for lambda in 1..q {
            let rs = build_root_set(&m, lambda, q as f64, t)?;
            if rs.roots.is_empty() {
                continue;
            }
            let pts: Vec<f64> = rs.roots.iter().map(|&x| x as f64 / q as f64).collect();
            let d = star_discrepancy(&pts);
            for h in [1usize, 5, 25] {
                cases += 1;
                let sums = root_exponential_sums(&rs.roots, q, h);
                if d > erdos_turan_bound(&sums, pts.len(), h)? + 1e-9 {
                    bad.push(format!("q={q} λ={lambda} H={h}"));
                }
            }
        }
    }
    Ok(outcome("Erdős–Turán bound holds on root sequences", cases, bad))
}

fn heath_brown() -> Result<CheckOutcome> {
    let mut bad = Vec::new();
    for j in 1..=3 {
        let params = HBParams::with_natural_cutoff(j, 5000)?;
        let dev = verify_hb_range(&params)?;
        if dev > 1e-9 {
            bad.push(format!("J={j} deviation {dev:e}"));
        }
    }
    Ok(outcome("Heath-Brown identity reproduces Λ", 3, bad))
}

fn sums_symmetry(t: &PrimeTable) -> Result<CheckOutcome> {
    let (mut cases, mut bad) = (0, Vec::new());
    for q in odd_primes(t, 400).step_by(7) {
        let m = Modulus::prime(q)?;
        for h in [1, 2, q - 1] {
            cases += 2;
            let s = weyl_sum_s(&m, h, q as f64, t)?;
            if s.value.im.abs() > 1e-9 {
                bad.push(format!("Im S, q={q} h={h}"));
            }
            let full = incomplete_sqrt_sum(&m, 1, h, q)?;
            if full.sum.value.norm() > 1e-9 {
                bad.push(format!("complete sum, q={q} h={h}"));
            }
        }
    }
    Ok(outcome("conjugate symmetry and complete-sum orthogonality", cases, bad))
}

/// Runs every check; a check failing to run is reported as an error.
pub fn run_all() -> Result<Vec<CheckOutcome>> {
    let t = primes_up_to(1000)?;
    Ok(vec![
        sqrt_exhaustive(&t)?,
        gauss_closed_form()?,
        discrepancy_exact(&t)?,
        erdos_turan_roots(&t)?,
        heath_brown()?,
        sums_symmetry(&t)?,
    ])
}
