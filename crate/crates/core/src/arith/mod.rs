//! Exact modular arithmetic and the number-theoretic primitives everything
//! else is built on: primality, sieving, Jacobi symbols, modular square roots,
//! quadratic Gauss sums and the classical multiplicative functions.

mod gauss;
mod jacobi;
mod modulus;
mod multiplicative;
mod primality;
mod sieve;
mod sqrt;

pub use gauss::{gauss_sum_closed, gauss_sum_direct};
pub use jacobi::{jacobi, legendre};
pub use modulus::Modulus;
pub use multiplicative::{mangoldt_table, mobius, mobius_table, von_mangoldt};
pub use primality::is_prime;
pub use sieve::{primes_up_to, primes_up_to_with_budget, PrimeTable, DEFAULT_SIEVE_BUDGET};
pub use sqrt::{sqrt_mod, smallest_non_residue, SquareRootTable};

use num_complex::Complex64;
use std::f64::consts::TAU;

/// Largest modulus accepted anywhere in the crate.
pub const MAX_MODULUS: u64 = 1 << 62;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// `e_q(r) = exp(2πi r / q)` for an exact residue `r`.
///
/// The residue is folded into `(-q/2, q/2]` before conversion so the angle
/// handed to `sin_cos` never exceeds π in magnitude.
#[inline]
pub fn e_q(r: u64, q: u64) -> Complex64 {
    let r = r % q;
    let signed = if r > q / 2 { r as f64 - q as f64 } else { r as f64 };
    let (s, c) = (TAU * signed / q as f64).sin_cos();
    Complex64::new(c, s)
}

/// Neumaier-compensated accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, &mut self.re_c, z.re);
        neumaier(&mut self.im, &mut self.im_c, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

#[inline]
fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

/// Compensated sum of real values.
pub fn sum_f64<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let (mut s, mut c) = (0.0, 0.0);
    for x in values {
        neumaier(&mut s, &mut c, x);
    }
    s + c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_gcd() {
        assert_eq!(inv_mod(3, 11), Some(4));
        assert_eq!(inv_mod(6, 9), None);
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(pow_mod(3, 5, 11), 1);
    }

    #[test]
    fn e_q_is_a_root_of_unity() {
        let z = e_q(1, 4);
        assert!((z.re).abs() < 1e-15 && (z.im - 1.0).abs() < 1e-15);
        let w = e_q(7, 7);
        assert!((w.re - 1.0).abs() < 1e-15 && w.im.abs() < 1e-15);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let vals = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(sum_f64(vals), 2.0);
    }
}
