use super::{legendre, mul_mod, pow_mod, Modulus};
use crate::error::{invalid, Error, Result};

/// Every `x ∈ [0, q)` with `x² ≡ a (mod q)` for prime `q`, in increasing order.
///
/// Uses Tonelli–Shanks with the smallest quadratic non-residue as the
/// generator of the 2-Sylow subgroup, so the result is deterministic.
pub fn sqrt_mod(a: u64, q: &Modulus) -> Result<Vec<u64>> {
    q.require_prime()?;
    let p = q.get();
    if a >= p {
        return Err(invalid(format!("residue {a} is not reduced modulo {p}")));
    }
    Ok(match sqrt_prime(a, p) {
        None => Vec::new(),
        Some(0) => vec![0],
        Some(x) => {
            let y = p - x;
            vec![x.min(y), x.max(y)]
        }
    })
}

/// The smallest quadratic non-residue modulo an odd prime `p`.
pub fn smallest_non_residue(p: u64) -> u64 {
    (2..p).find(|&z| legendre(z, p) == -1).expect("odd prime has a non-residue")
}

/// One square root of `a` modulo the odd prime `p`, or `None` for a non-residue.
pub(crate) fn sqrt_prime(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let odd = (p - 1) >> s;
    let z = smallest_non_residue(p);

    let mut m = s;
    let mut c = pow_mod(z, odd, p);
    let mut t = pow_mod(a, odd, p);
    let mut r = pow_mod(a, odd.div_ceil(2), p);
    while t != 1 {
        // least i with t^(2^i) = 1
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mul_mod(b, b, p);
        }
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Square roots of every residue modulo an odd `q`, found by squaring each
/// `x ∈ [0, q)`. Works for composite moduli, where a residue can have more
/// than two roots.
#[derive(Debug, Clone)]
pub struct SquareRootTable {
    q: u64,
    offsets: Vec<u32>,
    roots: Vec<u32>,
}

impl SquareRootTable {
    /// Largest modulus the exhaustive table is built for.
    pub const MAX_MODULUS: u64 = 1_000_000;

    pub fn new(q: &Modulus) -> Result<Self> {
        let n = q.get();
        if n > Self::MAX_MODULUS {
            return Err(Error::Budget(format!(
                "exhaustive square-root table limited to q ≤ {}, got {n}",
                Self::MAX_MODULUS
            )));
        }
        let nu = n as usize;
        let squares: Vec<u32> = (0..n).map(|x| mul_mod(x, x, n) as u32).collect();
        let mut offsets = vec![0u32; nu + 1];
        for &s in &squares {
            offsets[s as usize + 1] += 1;
        }
        for i in 0..nu {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut roots = vec![0u32; nu];
        for (x, &s) in squares.iter().enumerate() {
            roots[fill[s as usize] as usize] = x as u32;
            fill[s as usize] += 1;
        }
        Ok(SquareRootTable { q: n, offsets, roots })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Roots of `a mod q`, increasing.
    #[inline]
    pub fn roots(&self, a: u64) -> &[u32] {
        let a = (a % self.q) as usize;
        &self.roots[self.offsets[a] as usize..self.offsets[a + 1] as usize]
    }
}
