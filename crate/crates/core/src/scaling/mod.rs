//! Scaling exponents of a time series read as the increments of a diffusion.
//!
//! The increments ξ_k are summed over windows of length t to give diffusion
//! displacements `x_i(t)`. Diffusion Entropy Analysis (DEA) histograms the
//! displacements with a bin width fixed across t and fits the Shannon entropy
//! `S(t) = A + δ ln t`; Standard Deviation Analysis (SDA) fits
//! `ln D(t) = const + H ln t` to their standard deviation. For Gaussian
//! diffusion δ = H = 0.5; for Lévy walks the two satisfy δ = 1/(3 - 2H), and
//! for Lévy flights SDA misses the scaling that DEA detects.

mod generators;

pub use generators::{flight_duration, gen_series, GeneratorSpec};

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::numerics::{fixed_width_histogram, histogram_entropy, linear_fit, FitLine};

/// Fewest window sizes a fit is allowed to use.
pub const MIN_WINDOWS: usize = 5;

/// A finite increment sequence of length >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return domain(format!("a series needs at least 2 values, got {}", values.len()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return domain(format!("value {} at index {i} is not finite", values[i]));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sample standard deviation (n - 1 denominator).
    pub fn std_dev(&self) -> f64 {
        std_dev(&self.values)
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Window-size selection and binning for DEA and SDA.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeaConfig {
    /// Smallest window size, >= 2.
    pub t_min: usize,
    /// Largest window size; further capped at N/10.
    pub t_max: usize,
    /// Number of log-spaced window sizes before de-duplication.
    pub n_window_sizes: usize,
    /// κ in the bin width h = s/κ, s the increment standard deviation.
    pub bin_fraction: f64,
    /// Stride-1 windows when true, disjoint windows otherwise.
    pub overlap: bool,
}

impl Default for DeaConfig {
    fn default() -> Self {
        Self { t_min: 10, t_max: usize::MAX, n_window_sizes: 25, bin_fraction: 10.0, overlap: true }
    }
}

impl DeaConfig {
    /// Distinct log-spaced integer window sizes in `[t_min, min(t_max, N/10)]`.
    pub fn window_sizes(&self, n: usize) -> Result<Vec<usize>> {
        if self.t_min < 2 {
            return domain(format!("t_min must be >= 2, got {}", self.t_min));
        }
        if self.n_window_sizes < MIN_WINDOWS {
            return domain(format!("need at least {MIN_WINDOWS} window sizes, got {}", self.n_window_sizes));
        }
        if !(self.bin_fraction > 0.0) || !self.bin_fraction.is_finite() {
            return domain(format!("bin fraction must be positive, got {}", self.bin_fraction));
        }
        let hi = self.t_max.min(n / 10);
        let lo = self.t_min;
        if lo >= hi {
            return domain(format!("empty window range: t_min = {lo}, upper limit min(t_max, N/10) = {hi}"));
        }
        let (llo, lhi) = ((lo as f64).ln(), (hi as f64).ln());
        let m = self.n_window_sizes;
        let mut sizes: Vec<usize> = (0..m)
            .map(|k| {
                let t = (llo + (lhi - llo) * k as f64 / (m - 1) as f64).exp().round() as usize;
                t.clamp(lo, hi)
            })
            .collect();
        sizes.dedup();
        if sizes.len() < MIN_WINDOWS {
            return domain(format!("only {} distinct window sizes in [{lo}, {hi}]; need {MIN_WINDOWS}", sizes.len()));
        }
        Ok(sizes)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeaResult {
    /// (t, S(t)) in ascending t.
    pub points: Vec<(usize, f64)>,
    /// Slope of S(t) against ln t.
    pub delta: f64,
    /// Intercept A of S(t) = A + δ ln t.
    pub intercept: f64,
    pub fit: FitLine,
    /// Bin width h used for every t.
    pub bin_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdaResult {
    /// (t, D(t)) in ascending t.
    pub points: Vec<(usize, f64)>,
    /// Slope of ln D(t) against ln t.
    pub hurst: f64,
    pub fit: FitLine,
}

/// Sums of `t` consecutive increments starting at every index (stride 1),
/// `N - t + 1` values.
pub fn build_displacements(series: &TimeSeries, t: usize) -> Result<Vec<f64>> {
    displacements(series, t, true)
}

/// As [`build_displacements`], with disjoint windows when `overlap` is false.
pub fn displacements(series: &TimeSeries, t: usize, overlap: bool) -> Result<Vec<f64>> {
    let n = series.len();
    if t == 0 || t > n {
        return domain(format!("window size must be in [1, {n}], got {t}"));
    }
    let v = series.values();
    let stride = if overlap { 1 } else { t };
    let count = (n - t) / stride + 1;
    let mut out = Vec::with_capacity(count);
    // Sliding sum, refreshed at the start of every block of windows so rounding
    // does not accumulate over the whole series.
    const REFRESH: usize = 1024;
    let mut sum = 0.0;
    for j in 0..count {
        let start = j * stride;
        if !overlap || j % REFRESH == 0 {
            sum = v[start..start + t].iter().sum();
        } else {
            sum += v[start + t - 1] - v[start - 1];
        }
        out.push(sum);
    }
    Ok(out)
}

/// Diffusion Entropy Analysis.
pub fn dea(series: &TimeSeries, config: &DeaConfig) -> Result<DeaResult> {
    let sizes = config.window_sizes(series.len())?;
    let s = series.std_dev();
    if !(s > 0.0) {
        return Err(Error::DegenerateSeries("increments have zero variance".into()));
    }
    let h = s / config.bin_fraction;
    let points: Vec<(usize, f64)> = sizes
        .par_iter()
        .map(|&t| {
            let x = displacements(series, t, config.overlap)?;
            let bins = fixed_width_histogram(&x, h, 0.0)?;
            Ok((t, histogram_entropy(&bins) + h.ln()))
        })
        .collect::<Result<_>>()?;
    let fit = fit_against_ln_t(&points, Ok)?;
    Ok(DeaResult { points, delta: fit.slope, intercept: fit.intercept, fit, bin_width: h })
}

/// Standard Deviation Analysis.
pub fn sda(series: &TimeSeries, config: &DeaConfig) -> Result<SdaResult> {
    let sizes = config.window_sizes(series.len())?;
    let points: Vec<(usize, f64)> = sizes
        .par_iter()
        .map(|&t| {
            let x = displacements(series, t, config.overlap)?;
            Ok((t, std_dev(&x)))
        })
        .collect::<Result<_>>()?;
    let fit = fit_against_ln_t(&points, |d| {
        if d > 0.0 {
            Ok(d.ln())
        } else {
            Err(Error::DegenerateSeries("displacements have zero spread".into()))
        }
    })?;
    Ok(SdaResult { points, hurst: fit.slope, fit })
}

/// δ = 1/(3 - 2H), the Lévy-walk link between the DEA and SDA exponents.
pub fn levy_walk_delta(h: f64) -> Result<f64> {
    if !(h < 1.5) {
        return domain(format!("H must be below 1.5, got {h}"));
    }
    Ok(1.0 / (3.0 - 2.0 * h))
}

fn fit_against_ln_t<F: Fn(f64) -> Result<f64>>(points: &[(usize, f64)], y: F) -> Result<FitLine> {
    let xy: Vec<(f64, f64)> = points.iter().map(|&(t, v)| Ok(((t as f64).ln(), y(v)?))).collect::<Result<_>>()?;
    linear_fit(&xy)
}

fn std_dev(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    if x.len() < 2 {
        return 0.0;
    }
    let mean = x.iter().sum::<f64>() / n;
    let ss: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (n - 1.0)).sqrt()
}
