//! Exponential sums over square roots: Weyl sums over primes, the
//! von Mangoldt weighted variant, bilinear forms, incomplete sums, the
//! closed-form bounds they are compared against, and the Erdős–Turán bound.

mod bounds;
mod erdos_turan;
mod sums;
mod weights;

pub use bounds::{bound_b, bounds_old, optimized_parameters, theorem_bound, OptimizedParameters};
pub use erdos_turan::{erdos_turan_bound, root_exponential_sums, star_discrepancy};
pub use sums::{
    bilinear_w, bilinear_w_with, incomplete_sqrt_sum, mangoldt_sum, weyl_sum_s, IncompleteSum, SumValue,
};
pub use weights::WeightVector;
