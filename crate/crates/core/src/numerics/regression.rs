use crate::error::{Error, Result};

/// Ordinary least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitLine {
    pub intercept: f64,
    pub slope: f64,
    /// Coefficient of determination, clamped to [0, 1].
    pub r_squared: f64,
    pub n_points: usize,
}

impl FitLine {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Least-squares fit of a straight line through `points`.
///
/// Uses centred sums, so the result does not depend on the order of the
/// points beyond floating-point summation order.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<FitLine> {
    let n = points.len();
    if n < 2 {
        return Err(Error::DegenerateFit(format!("need at least 2 points, got {n}")));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::DegenerateFit("non-finite coordinate".into()));
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx <= f64::EPSILON * f64::EPSILON * mx.abs().max(1.0).powi(2) * nf {
        return Err(Error::DegenerateFit("all x values are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    // Exactly collinear input (including a horizontal line) gives r² = 1.
    let r_squared = if ss_res <= 1e-24 * syy.max(f64::MIN_POSITIVE) || syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(FitLine { intercept, slope, r_squared, n_points: n })
}
