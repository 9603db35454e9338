use std::collections::BTreeMap;

use crate::error::{domain, Result};

/// Counts of `data` in bins `[origin + j h, origin + (j+1) h)`, ascending by
/// bin index, empty bins omitted. Values on an edge belong to the upper bin.
pub fn fixed_width_histogram(data: &[f64], bin_width: f64, origin: f64) -> Result<Vec<(i64, u64)>> {
    if data.is_empty() {
        return domain("histogram of empty data");
    }
    if !(bin_width > 0.0) || !bin_width.is_finite() || !origin.is_finite() {
        return domain(format!("bin width must be positive and finite, got {bin_width}"));
    }
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for &x in data {
        if !x.is_finite() {
            return domain(format!("non-finite value {x} in histogram data"));
        }
        let j = ((x - origin) / bin_width).floor() as i64;
        *counts.entry(j).or_insert(0) += 1;
    }
    Ok(counts.into_iter().collect())
}

/// Plug-in Shannon entropy -Σ p ln p of the bin probabilities (0 ln 0 := 0).
pub fn histogram_entropy(bins: &[(i64, u64)]) -> f64 {
    let total: u64 = bins.iter().map(|b| b.1).sum();
    let n = total as f64;
    let mut s = 0.0;
    for &(_, c) in bins {
        if c > 0 {
            let p = c as f64 / n;
            s -= p * p.ln();
        }
    }
    s
}
