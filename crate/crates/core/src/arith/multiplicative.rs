use super::{is_prime, sieve::isqrt};

/// `Λ(n)`: `log p` when `n = p^k`, otherwise 0.
pub fn von_mangoldt(n: u64) -> f64 {
    match prime_power_base(n) {
        Some(p) => (p as f64).ln(),
        None => 0.0,
    }
}

/// The prime `p` with `n = p^k`, `k ≥ 1`, if there is one.
fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    if n & (n - 1) == 0 {
        return Some(2);
    }
    if n % 2 == 0 {
        return None;
    }
    // n = r^k with k ≤ log_3 n; try every exponent
    for k in 1..=40u32 {
        let r = integer_root(n, k);
        if r < 3 {
            break;
        }
        if r.checked_pow(k) == Some(n) && is_prime(r) {
            return Some(r);
        }
    }
    None
}

fn integer_root(n: u64, k: u32) -> u64 {
    if k == 1 {
        return n;
    }
    if k == 2 {
        return isqrt(n);
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && r.checked_pow(k).map_or(true, |v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// Möbius function by trial division.
pub fn mobius(n: u64) -> i8 {
    assert!(n >= 1, "mobius is defined for n ≥ 1");
    let mut n = n;
    let mut sign = 1i8;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
            if is_prime(n) {
                break;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `μ(0..=n)` by a linear sieve (index 0 is unused and set to 0).
pub fn mobius_table(n: usize) -> Vec<i8> {
    let mut mu = vec![0i8; n + 1];
    if n == 0 {
        return mu;
    }
    mu[1] = 1;
    let mut primes = Vec::new();
    let mut composite = vec![false; n + 1];
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}

/// `Λ(0..=n)` (index 0 set to 0).
pub fn mangoldt_table(n: usize) -> Vec<f64> {
    let mut lam = vec![0.0; n + 1];
    let mut composite = vec![false; n + 1];
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        let mut m = p * p;
        while m <= n {
            composite[m] = true;
            m += p;
        }
        let lp = (p as f64).ln();
        let mut pk = p;
        loop {
            lam[pk] = lp;
            match pk.checked_mul(p) {
                Some(next) if next <= n => pk = next,
                _ => break,
            }
        }
    }
    lam
}
