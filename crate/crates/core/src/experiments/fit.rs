use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Least-squares line through `(scale, value)`, on logarithms of both when
/// `log_log` is set. An exactly constant response has `r² = 1`.
pub fn exponent_fit(series: &[(f64, f64)], log_log: bool) -> Result<FitResult> {
    if series.len() < 3 {
        return Err(invalid(format!("a fit needs at least 3 points, got {}", series.len())));
    }
    let mut pts = Vec::with_capacity(series.len());
    for &(x, y) in series {
        if !(x.is_finite() && y.is_finite()) {
            return Err(invalid(format!("non-finite point ({x}, {y})")));
        }
        if log_log {
            if x <= 0.0 || y <= 0.0 {
                return Err(invalid(format!("log-log fit needs positive points, got ({x}, {y})")));
            }
            pts.push((x.ln(), y.ln()));
        } else {
            pts.push((x, y));
        }
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("all scales are equal; the slope is undefined"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        points: pts.len(),
    })
}
