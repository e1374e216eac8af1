//! Computational toolkit for the distribution of modular square roots of
//! primes: the solutions of `x² ≡ λp (mod q)` for primes `p ≤ P`, their exact
//! discrepancy, the exponential and bilinear sums that control it, and
//! averaged-over-`q` experiments.

pub mod arith;
pub mod checks;
pub mod error;
pub mod experiments;
pub mod expsums;
pub mod identity;
pub mod roots;

pub use error::{Error, Result};

/// Version recorded in every output artifact and cache key.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
