use proptest::prelude::*;
use sqrtlab_core::arith::{legendre, primes_up_to, Modulus, PrimeTable};
use sqrtlab_core::experiments::{avg_max_discrepancy, PrimeRange, SweepRow};
use sqrtlab_core::roots::{build_root_set, discrepancy, residue_prime_count, LambdaStrategy};
use std::sync::OnceLock;

fn table() -> &'static PrimeTable {
    static T: OnceLock<PrimeTable> = OnceLock::new();
    T.get_or_init(|| primes_up_to(5000).unwrap())
}

fn row_invariants(row: &SweepRow, p: f64) {
    let t = table();
    let pi = t.pi(p) as u64;
    assert_eq!(row.pi_p, pi);
    assert!(row.n_q <= pi);
    assert!(row.char_sum.unsigned_abs() <= pi);
    // n_q from the character sum: (pi + S − [q ≤ P]) / 2
    let divides = (row.q as f64 <= p) as i64;
    assert_eq!((pi as i64 + row.char_sum - divides) / 2, row.n_q as i64, "q={}", row.q);
    let (n, s) = residue_prime_count(&Modulus::prime(row.q).unwrap(), p, t).unwrap();
    assert_eq!((n as u64, s), (row.n_q, row.char_sum));
    // λ*p is a residue exactly for the primes in λ*'s class
    let residues = if legendre(row.lambda_star, row.q) == 1 { row.n_q } else { pi - divides as u64 - row.n_q };
    let ceiling = (row.q - 1) as f64 / row.q as f64 * pi as f64 + 2.0 * residues as f64;
    assert!(row.delta() <= ceiling + 1e-9, "q={} delta {} ceiling {ceiling}", row.q, row.delta());
    assert!(row.ratio > 0.0 && row.ratio.is_finite());
}

#[test]
fn full_rows_satisfy_the_invariants() {
    for (p, q) in [(50.0, 200.0), (200.0, 200.0), (2.0, 50.0)] {
        let r = avg_max_discrepancy(p, q, PrimeRange::All, LambdaStrategy::Full, table()).unwrap();
        assert!(r.rows.windows(2).all(|w| w[0].q < w[1].q));
        assert_eq!(r.rows[0].q, 3);
        for row in &r.rows {
            row_invariants(row, p);
        }
    }
}

#[test]
fn full_maximum_matches_lambda_by_lambda() {
    let p = 60.0;
    let r = avg_max_discrepancy(p, 120.0, PrimeRange::Dyadic, LambdaStrategy::Full, table()).unwrap();
    for row in &r.rows {
        let m = Modulus::prime(row.q).unwrap();
        let all: Vec<u64> = (1..row.q)
            .map(|l| discrepancy(&build_root_set(&m, l, p, table()).unwrap()).delta_numerator)
            .collect();
        let best = *all.iter().max().unwrap();
        assert_eq!(row.delta_num, best);
        assert_eq!(all.iter().position(|&d| d == best).unwrap() as u64 + 1, row.lambda_star);
    }
}

#[test]
fn sampling_is_a_lower_bound() {
    let full = avg_max_discrepancy(300.0, 300.0, PrimeRange::All, LambdaStrategy::Full, table()).unwrap();
    for seed in [1, 2, 3] {
        let s = avg_max_discrepancy(300.0, 300.0, PrimeRange::All, LambdaStrategy::Sample { k: 5, seed }, table()).unwrap();
        assert!(s.average <= full.average);
        for (a, b) in s.rows.iter().zip(&full.rows) {
            assert_eq!(a.q, b.q);
            assert!(a.delta_num <= b.delta_num);
            assert_eq!(a.seed, Some(seed));
            row_invariants(a, 300.0);
        }
    }
}

#[test]
fn samples_are_reproducible() {
    let run = || avg_max_discrepancy(500.0, 500.0, PrimeRange::All, LambdaStrategy::Sample { k: 7, seed: 42 }, table()).unwrap();
    assert_eq!(run(), run());
}

#[test]
fn average_divides_by_q_and_skips_two() {
    let r = avg_max_discrepancy(10.0, 10.0, PrimeRange::All, LambdaStrategy::Full, table()).unwrap();
    assert_eq!(r.rows.iter().map(|r| r.q).collect::<Vec<_>>(), [3, 5, 7]);
    let sum: f64 = r.rows.iter().map(SweepRow::delta).sum();
    assert!((r.average - sum / 10.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn char_sum_agrees_with_euler(qi in 1usize..300, p in 2.0f64..3000.0) {
        let t = table();
        let q = t.primes()[qi];
        let (n, s) = residue_prime_count(&Modulus::prime(q).unwrap(), p, t).unwrap();
        let euler: i64 = t.up_to(p).iter().map(|&pp| legendre(pp, q) as i64).sum();
        prop_assert_eq!(s, euler);
        prop_assert!(n <= t.pi(p));
    }

    #[test]
    fn ranges_select_odd_primes(lo in 0u64..400, span in 0u64..400) {
        let hi = lo + span;
        match (PrimeRange::Range { lo, hi }).select(500.0, table()) {
            Ok(qs) => {
                prop_assert!(qs.iter().all(|&q| q >= lo.max(3) && q <= hi.min(500)));
                prop_assert!(!qs.is_empty());
            }
            Err(_) => prop_assert!(table().range(lo.max(3), hi.min(500)).is_empty() || lo.max(3) > hi.min(500)),
        }
    }
}
