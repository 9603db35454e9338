//! Scalar pathway densities on `x > 0`,
//!
//! ```text
//! f(x) = c · x^γ · [1 - a(1-α) x^δ]^{1/(1-α)}
//! ```
//!
//! which is a bounded-support type-1 beta form for α < 1, turns into
//! `c · x^γ · [1 + a(α-1) x^δ]^{-1/(α-1)}` for α > 1 and tends to the
//! generalized gamma `c · x^γ · exp(-a x^δ)` as α → 1. With γ = 0, δ = 1 the
//! α > 1 branch is the Tsallis q-exponential.
//!
//! Besides the density itself this module carries the generalized entropy
//! measures ([`entropy`]), the stationarity check that certifies a density as
//! the entropy optimizer ([`stationarity`]) and maximum-likelihood fitting
//! ([`fit`]).

pub mod entropy;
pub mod fit;
pub mod stationarity;

use crate::error::{domain, Result};
use crate::kernel::{Branch, PowerKernel};
use crate::numerics::{integrate_with_breaks, RandomStream};

const CDF_TOL: f64 = 1e-12;

/// The quadruple (α, a, γ, δ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarPathwayParams {
    /// Pathway parameter.
    pub alpha: f64,
    /// Scale, > 0.
    pub a: f64,
    /// Power exponent, >= 0.
    pub gamma: f64,
    /// Stretch exponent, > 0.
    pub delta: f64,
}

impl ScalarPathwayParams {
    pub fn new(alpha: f64, a: f64, gamma: f64, delta: f64) -> Self {
        Self { alpha, a, gamma, delta }
    }

    /// The exponential law with the given rate (α = 1, γ = 0, δ = 1).
    pub fn exponential(rate: f64) -> Self {
        Self::new(1.0, rate, 0.0, 1.0)
    }

    pub fn branch(&self) -> Branch {
        Branch::of(self.alpha)
    }

    /// Checks every invariant, including normalizability of the α > 1 branch.
    pub fn validate(&self) -> Result<()> {
        PathwayDensity::new(*self).map(|_| ())
    }
}

/// Support interval `[lower, upper]` of a density on the half-line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lower: f64,
    pub upper: f64,
}

impl Support {
    pub fn contains_interior(&self, x: f64) -> bool {
        x > self.lower && x < self.upper
    }
}

/// Anything that can be evaluated as a probability density on a known support.
pub trait Density {
    fn pdf(&self, x: f64) -> f64;
    fn support(&self) -> Support;
}

/// A validated scalar pathway density with its constant precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathwayDensity {
    params: ScalarPathwayParams,
    kernel: PowerKernel,
}

impl PathwayDensity {
    pub fn new(params: ScalarPathwayParams) -> Result<Self> {
        // γ >= 0 follows the optimization setting; the kernel itself accepts
        // any γ > -1, so relaxing this only needs the bound changed here.
        if !(params.gamma >= 0.0) {
            return domain(format!("gamma must be >= 0, got {}", params.gamma));
        }
        let kernel = PowerKernel::new(params.alpha, params.a, params.gamma, params.delta)?;
        Ok(Self { params, kernel })
    }

    pub fn params(&self) -> ScalarPathwayParams {
        self.params
    }

    pub fn branch(&self) -> Branch {
        self.kernel.branch()
    }

    pub fn normalizing_constant(&self) -> f64 {
        self.kernel.ln_norm().exp()
    }

    pub fn ln_normalizing_constant(&self) -> f64 {
        self.kernel.ln_norm()
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        self.kernel.ln_pdf(x)
    }

    /// One draw.
    pub fn draw(&self, stream: &mut RandomStream) -> f64 {
        self.kernel.sample(stream)
    }

    /// n independent draws.
    pub fn sample(&self, n: usize, stream: &mut RandomStream) -> Vec<f64> {
        (0..n).map(|_| self.kernel.sample(stream)).collect()
    }

    /// P(X <= x) by quadrature.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        let sup = self.support();
        if x <= sup.lower {
            return Ok(0.0);
        }
        if x >= sup.upper {
            return Ok(1.0);
        }
        let q = integrate_with_breaks(|t| self.kernel.pdf(t), 0.0, x, &[], CDF_TOL)?;
        Ok(q.value.clamp(0.0, 1.0))
    }

    /// E[X^k] in closed form.
    pub fn moment(&self, k: f64) -> Result<f64> {
        self.kernel.ln_moment(k).map(f64::exp)
    }
}

impl Density for PathwayDensity {
    fn pdf(&self, x: f64) -> f64 {
        self.kernel.pdf(x)
    }

    fn support(&self) -> Support {
        Support { lower: 0.0, upper: self.kernel.upper() }
    }
}

/// Uniform density on `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform {
    lower: f64,
    upper: f64,
}

impl Uniform {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(upper > lower) || !lower.is_finite() || !upper.is_finite() {
            return domain(format!("uniform needs finite lower < upper, got [{lower}, {upper}]"));
        }
        Ok(Self { lower, upper })
    }
}

impl Density for Uniform {
    fn pdf(&self, x: f64) -> f64 {
        if x >= self.lower && x <= self.upper {
            1.0 / (self.upper - self.lower)
        } else {
            0.0
        }
    }

    fn support(&self) -> Support {
        Support { lower: self.lower, upper: self.upper }
    }
}

/// A density given by a closure, for ad-hoc models.
pub struct FnDensity<F: Fn(f64) -> f64> {
    f: F,
    support: Support,
}

impl<F: Fn(f64) -> f64> FnDensity<F> {
    pub fn new(f: F, lower: f64, upper: f64) -> Self {
        Self { f, support: Support { lower, upper } }
    }
}

impl<F: Fn(f64) -> f64> Density for FnDensity<F> {
    fn pdf(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    fn support(&self) -> Support {
        self.support
    }
}

/// Normalizing constant of the scalar pathway density.
pub fn normalizing_constant(params: ScalarPathwayParams) -> Result<f64> {
    PathwayDensity::new(params).map(|d| d.normalizing_constant())
}

/// Density value; 0 off the support.
pub fn pdf(params: ScalarPathwayParams, x: f64) -> Result<f64> {
    PathwayDensity::new(params).map(|d| d.pdf(x))
}

/// ln density; -inf off the support.
pub fn log_pdf(params: ScalarPathwayParams, x: f64) -> Result<f64> {
    PathwayDensity::new(params).map(|d| d.log_pdf(x))
}

/// n exact draws: z = a|1-α|x^δ is drawn as a type-1 beta, type-2 beta or gamma
/// variate and mapped back.
pub fn sample(params: ScalarPathwayParams, n: usize, stream: &mut RandomStream) -> Result<Vec<f64>> {
    PathwayDensity::new(params).map(|d| d.sample(n, stream))
}
