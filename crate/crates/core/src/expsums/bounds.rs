//! Closed-form bounds with every `q^{o(1)}` factor set to 1 ("normalized").

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// `𝔅(M,N,Q) = (MN)^{3/4} Q^{1/8} (M^{1/4}Q^{-1/8} + 1)(N^{1/4}Q^{-1/8} + 1)`.
pub fn bound_b(m: f64, n: f64, big_q: f64) -> f64 {
    let qe = big_q.powf(-0.125);
    (m * n).powf(0.75) * big_q.powf(0.125) * (m.powf(0.25) * qe + 1.0) * (n.powf(0.25) * qe + 1.0)
}

/// The two older bounds for normalized weights:
/// `q^{1/8}(MN)^{19/24}(M^{7/48}q^{-1/16}+1)(N^{7/48}q^{-1/16}+1)` and
/// `q^{1/8}(MN)^{13/16}(M^{3/16}q^{-1/8}+1)(N^{3/16}q^{-1/8}+1)`.
pub fn bounds_old(m: f64, n: f64, q: f64) -> (f64, f64) {
    let q8 = q.powf(0.125);
    let q16 = q.powf(-1.0 / 16.0);
    let first = q8
        * (m * n).powf(19.0 / 24.0)
        * (m.powf(7.0 / 48.0) * q16 + 1.0)
        * (n.powf(7.0 / 48.0) * q16 + 1.0);
    let second = q8
        * (m * n).powf(13.0 / 16.0)
        * (m.powf(3.0 / 16.0) / q8 + 1.0)
        * (n.powf(3.0 / 16.0) / q8 + 1.0);
    (first, second)
}

/// `P^{11/12} + P^{4/5} Q^{1/10}` for `1 ≤ P ≤ Q`.
pub fn theorem_bound(p: f64, big_q: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(invalid(format!("P must be at least 1, got {p}")));
    }
    if p > big_q {
        return Err(invalid(format!("P = {p} exceeds Q = {big_q}")));
    }
    Ok(p.powf(11.0 / 12.0) + p.powf(0.8) * big_q.powf(0.1))
}

/// The balancing choices `L = P^{1/5}`, `S = P^{1/3}`, `U = P^{1/5} Q^{2/5}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizedParameters {
    pub l: f64,
    pub s: f64,
    pub u: f64,
}

pub fn optimized_parameters(p: f64, big_q: f64) -> Result<OptimizedParameters> {
    if !(p >= 1.0) || p > big_q {
        return Err(invalid(format!("need 1 ≤ P ≤ Q, got P = {p}, Q = {big_q}")));
    }
    let params = OptimizedParameters {
        l: p.powf(0.2),
        s: p.powf(1.0 / 3.0),
        u: p.powf(0.2) * big_q.powf(0.4),
    };
    // relative slack for P = 1, where all three coincide
    let tol = 1e-12;
    assert!(
        params.u >= params.s * (1.0 - tol) && params.s >= params.l * (1.0 - tol) && params.l >= 1.0 - tol,
        "ordering U ≥ S ≥ L ≥ 1 violated for P = {p}, Q = {big_q}"
    );
    Ok(params)
}
