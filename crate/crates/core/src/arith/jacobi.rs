use crate::error::{invalid, Result};

/// Jacobi symbol `(k/q)` for odd `q ≥ 3`; `k` may be negative.
pub fn jacobi(k: i64, q: u64) -> Result<i8> {
    if q < 3 || q % 2 == 0 {
        return Err(invalid(format!(
            "Jacobi symbol needs an odd modulus at least 3, got {q}"
        )));
    }
    let a = (k as i128).rem_euclid(q as i128) as u64;
    Ok(jacobi_odd(a, q))
}

/// Legendre symbol for an odd prime `q`; the caller guarantees the modulus.
#[inline]
pub fn legendre(a: u64, q: u64) -> i8 {
    jacobi_odd(a % q, q)
}

/// Binary Jacobi algorithm. `n` must be odd.
fn jacobi_odd(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1i8;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        // (2/n) = -1 exactly when n ≡ 3, 5 (mod 8)
        if z & 1 == 1 && matches!(n & 7, 3 | 5) {
            t = -t;
        }
        // reciprocity: flip when both are 3 mod 4
        if a & 3 == 3 && n & 3 == 3 {
            t = -t;
        }
        (a, n) = (n % a, a);
    }
    if n == 1 {
        t
    } else {
        0
    }
}
