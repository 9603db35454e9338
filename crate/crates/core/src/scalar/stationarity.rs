//! Certificate that a density solves the Euler equation of the constrained
//! entropy optimization.
//!
//! Optimizing `M_α` under fixed moments of `x^{γ(1-α)}` and `x^{γ(1-α)+δ}`
//! forces `(f(x)/x^γ)^{1-α}` to be affine in `x^δ`; at α = 1 the same holds for
//! `ln f(x) - γ ln x`. The residual of a least-squares line through those
//! transformed values on a grid is therefore zero (up to rounding) exactly for
//! the pathway family.

use super::{Density, PathwayDensity, ScalarPathwayParams};
use crate::error::{domain, Result};
use crate::kernel::Branch;
use crate::numerics::linear_fit;

/// Maximum absolute residual of the affine fit for the pathway density with
/// `params` on `grid` (points strictly inside the support).
pub fn euler_stationarity_residual(params: ScalarPathwayParams, grid: &[f64]) -> Result<f64> {
    let d = PathwayDensity::new(params)?;
    let sup = d.support();
    if let Some(x) = grid.iter().find(|&&x| !sup.contains_interior(x)) {
        return domain(format!("grid point {x} is outside the support interior ({}, {})", sup.lower, sup.upper));
    }
    stationarity_residual(|x| d.pdf(x), params.alpha, params.gamma, params.delta, grid)
}

/// Same check for an arbitrary density function evaluated against the
/// stationarity condition implied by (α, γ, δ).
pub fn stationarity_residual<F: Fn(f64) -> f64>(
    pdf: F,
    alpha: f64,
    gamma: f64,
    delta: f64,
    grid: &[f64],
) -> Result<f64> {
    if grid.len() < 4 {
        return domain(format!("stationarity check needs at least 4 grid points, got {}", grid.len()));
    }
    let mut pts = Vec::with_capacity(grid.len());
    for &x in grid {
        let f = pdf(x);
        if !(x > 0.0) || !(f > 0.0) {
            return domain(format!("density must be positive at grid point {x}"));
        }
        let t = x.powf(delta);
        let y = match Branch::of(alpha) {
            Branch::Gamma => f.ln() - gamma * x.ln(),
            _ => (f / x.powf(gamma)).powf(1.0 - alpha),
        };
        pts.push((t, y));
    }
    let fit = linear_fit(&pts)?;
    Ok(pts.iter().map(|&(t, y)| (y - fit.predict(t)).abs()).fold(0.0, f64::max))
}

/// `n` evenly spaced points strictly inside the support of `params`; on an
/// unbounded support the grid spans four characteristic lengths a^{-1/δ}.
pub fn interior_grid(params: ScalarPathwayParams, n: usize) -> Result<Vec<f64>> {
    let d = PathwayDensity::new(params)?;
    let upper = d.support().upper;
    let span = if upper.is_finite() { upper } else { 4.0 * params.a.powf(-1.0 / params.delta) };
    Ok((1..=n).map(|i| span * i as f64 / (n + 1) as f64).collect())
}
