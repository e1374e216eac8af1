use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Complex weights `γ_1, …, γ_K` with cached 1-, 2- and sup-norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    values: Vec<Complex64>,
    norm_1: f64,
    norm_2: f64,
    norm_inf: f64,
}

impl WeightVector {
    pub fn new(values: Vec<Complex64>) -> Self {
        let norm_1 = crate::arith::sum_f64(values.iter().map(|z| z.norm()));
        let norm_2 = crate::arith::sum_f64(values.iter().map(|z| z.norm_sqr())).sqrt();
        let norm_inf = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        WeightVector { values, norm_1, norm_2, norm_inf }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn ones(len: usize) -> Self {
        Self::from_real(&vec![1.0; len])
    }

    pub fn zeros(len: usize) -> Self {
        Self::from_real(&vec![0.0; len])
    }

    /// Unimodular weights `e(θ_m)` with `θ_m` uniform, from a seeded ChaCha8
    /// stream.
    pub fn random_phases(len: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::new((0..len).map(|_| Complex64::from_polar(1.0, TAU * rng.gen::<f64>())).collect())
    }

    /// Weight at 1-based index `m`.
    pub fn get(&self, m: usize) -> Complex64 {
        self.values[m - 1]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm_1(&self) -> f64 {
        self.norm_1
    }

    pub fn norm_2(&self) -> f64 {
        self.norm_2
    }

    pub fn norm_inf(&self) -> f64 {
        self.norm_inf
    }

    /// `‖γ‖_2 ≤ √K` and `‖γ‖_∞ ≤ 1`.
    pub fn is_normalized(&self) -> bool {
        self.norm_2 <= (self.len() as f64).sqrt() * (1.0 + 1e-12) && self.norm_inf <= 1.0 + 1e-12
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.values.iter().map(|&z| z * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "weight vectors differ in length");
        Self::new(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn random_phases_are_normalized_and_seeded() {
        let w = WeightVector::random_phases(50, 7);
        assert!(w.is_normalized());
        assert!((w.norm_1() - 50.0).abs() < 1e-9);
        assert_eq!(w, WeightVector::random_phases(50, 7));
        assert_ne!(w, WeightVector::random_phases(50, 8));
    }

    #[test]
    fn norms() {
        let w = WeightVector::from_real(&[3.0, -4.0]);
        assert_eq!(w.norm_1(), 7.0);
        assert_eq!(w.norm_2(), 5.0);
        assert_eq!(w.norm_inf(), 4.0);
        assert!(!w.is_normalized());
        assert!(WeightVector::ones(5).is_normalized());
        assert_eq!(w.get(2), Complex64::new(-4.0, 0.0));
    }

    proptest! {
        #[test]
        fn cached_norms_match_recomputation(v in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..60)) {
            let w = WeightVector::new(v.iter().map(|&(a, b)| Complex64::new(a, b)).collect());
            let n1: f64 = w.values().iter().map(|z| z.norm()).sum();
            let n2: f64 = w.values().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            prop_assert!((w.norm_1() - n1).abs() <= 1e-12 * n1.max(1.0));
            prop_assert!((w.norm_2() - n2).abs() <= 1e-12 * n2.max(1.0));
            prop_assert!(w.norm_inf() <= w.norm_2() + 1e-12);
        }
    }
}
