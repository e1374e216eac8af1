use num_complex::Complex64;

use super::{e_q, gcd, inv_mod, jacobi, mul_mod, CompensatedSum, Modulus};
use crate::error::{Error, Result};

/// `Σ_{x mod q} e_q(a x² + b x)` by direct summation.
pub fn gauss_sum_direct(a: u64, b: u64, q: &Modulus) -> Result<Complex64> {
    let n = q.get();
    let a = q.unit(a)?;
    let b = b % n;
    let mut acc = CompensatedSum::new();
    for x in 0..n {
        let phase = (mul_mod(mul_mod(x, x, n), a, n) + mul_mod(b, x, n)) % n;
        acc.add(e_q(phase, n));
    }
    Ok(acc.value())
}

/// Closed form `e_q(-(4a)⁻¹ b²) · ε_q · √q · (a/q)` with `ε_q ∈ {1, i}`
/// according to `q mod 4`.
pub fn gauss_sum_closed(a: u64, b: u64, q: &Modulus) -> Result<Complex64> {
    let n = q.get();
    let a = q.unit(a)?;
    let four_a = mul_mod(4, a, n);
    if gcd(four_a, n) != 1 {
        return Err(Error::NotUnit { value: four_a, modulus: n });
    }
    let inv = inv_mod(four_a, n).expect("unit has an inverse");
    let b = b % n;
    let t = mul_mod(inv, mul_mod(b, b, n), n);
    let twist = e_q((n - t) % n, n);
    let epsilon = if q.residue_class_mod_4() == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 1.0)
    };
    let symbol = jacobi(a as i64, n)? as f64;
    Ok(twist * epsilon * ((n as f64).sqrt() * symbol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(z: Complex64, w: Complex64, tol: f64) -> bool {
        (z - w).norm() <= tol
    }

    #[test]
    fn small_examples() {
        let q5 = Modulus::new(5).unwrap();
        let q3 = Modulus::new(3).unwrap();
        let s5 = Complex64::new(5f64.sqrt(), 0.0);
        let i3 = Complex64::new(0.0, 3f64.sqrt());
        assert!(close(gauss_sum_direct(1, 0, &q5).unwrap(), s5, 1e-12));
        assert!(close(gauss_sum_closed(1, 0, &q5).unwrap(), s5, 1e-12));
        assert!(close(gauss_sum_direct(1, 0, &q3).unwrap(), i3, 1e-12));
        assert!(close(gauss_sum_closed(1, 0, &q3).unwrap(), i3, 1e-12));

        // 1 + 2e(1/5) + 2e(4/5), written out term by term
        let manual = Complex64::new(1.0, 0.0) + e_q(1, 5) * 2.0 + e_q(4, 5) * 2.0;
        assert!(close(manual, s5, 1e-12));
    }

    #[test]
    fn closed_matches_direct_at_2_3_11() {
        let q = Modulus::new(11).unwrap();
        let d = gauss_sum_direct(2, 3, &q).unwrap();
        let c = gauss_sum_closed(2, 3, &q).unwrap();
        assert!(close(d, c, 1e-9), "{d} vs {c}");
    }

    #[test]
    fn rejects_non_unit_a() {
        let q = Modulus::new(9).unwrap();
        assert!(gauss_sum_direct(3, 1, &q).is_err());
        assert!(gauss_sum_closed(6, 1, &q).is_err());
    }

    #[test]
    fn closed_form_holds_for_every_b_including_non_units() {
        // Exhaustive over odd q < 100, every unit a and every residue b.
        for n in (3u64..100).step_by(2) {
            let q = Modulus::new(n).unwrap();
            for a in (1..n).filter(|&a| gcd(a, n) == 1) {
                for b in 0..n {
                    let d = gauss_sum_direct(a, b, &q).unwrap();
                    let c = gauss_sum_closed(a, b, &q).unwrap();
                    assert!(close(d, c, 1e-9), "q={n} a={a} b={b}: {d} vs {c}");
                }
            }
        }
    }
}
