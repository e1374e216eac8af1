//! Averages over prime moduli, exponent fits, gap statistics and the
//! reproducible grid sweep that ties them together.

mod average;
mod fit;
mod spacing;
mod sweep;

pub use average::{
    avg_char_deviation, avg_max_discrepancy, avg_max_discrepancy_with, CharDeviation, MaxDiscrepancyAverage,
    PrimeRange, SweepRow,
};
pub use fit::{exponent_fit, FitResult};
pub use spacing::{default_square_count, spacing_histogram, SpacingHistogram, SPACING_RANGE};
pub use sweep::{format_real, run_sweep, CellSummary, SweepConfig, SweepResult, SUMMARY_HEADER, SWEEP_HEADER};
