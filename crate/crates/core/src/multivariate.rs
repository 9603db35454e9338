//! Elliptically contoured p-variate pathway densities,
//!
//! ```text
//! f(X) = C* · u^γ · [1 - a(1-α) u^δ]^{1/(1-α)},   u = (X-μ)ᵀ V⁻¹ (X-μ)
//! ```
//!
//! with the same α > 1 and α = 1 forms as the scalar family. After
//! `Y = V^{-1/2}(X-μ)` the density depends on `Y` only through `u = YᵀY`, and
//! the volume element `dY = π^{p/2}/Γ(p/2) · u^{p/2-1} du` turns the problem
//! into a one-dimensional power kernel in `u` with exponent `γ + p/2 - 1`.
//! The same constant follows from polar coordinates, `dY = r^{p-1} dr dΩ` with
//! `u = r²`; both routes are exposed so they can be checked against each other.
//!
//! p = 1 is allowed and gives the law on the whole real line whose `|x - μ|²/V`
//! follows the radial law; it is symmetric about μ, unlike the scalar family
//! which lives on `x > 0`.

use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Result};
use crate::kernel::{Branch, PowerKernel};
use crate::numerics::{
    integrate_with_breaks, ln_det_from_factor, ln_gamma_unchecked, ln_pi, mahalanobis_sq, spd_factor, RandomStream,
};
use crate::scalar::{Density, Support};

const CDF_TOL: f64 = 1e-12;

/// Location, scale and shape parameters (μ, V, α, a, γ, δ).
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticalPathwayParams {
    pub mu: DVector<f64>,
    /// Symmetric positive definite scale matrix.
    pub v: DMatrix<f64>,
    pub alpha: f64,
    pub a: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl EllipticalPathwayParams {
    pub fn new(mu: DVector<f64>, v: DMatrix<f64>, alpha: f64, a: f64, gamma: f64, delta: f64) -> Self {
        Self { mu, v, alpha, a, gamma, delta }
    }

    /// Zero location and identity scale in dimension `p`.
    pub fn standard(p: usize, alpha: f64, a: f64, gamma: f64, delta: f64) -> Self {
        Self::new(DVector::zeros(p), DMatrix::identity(p, p), alpha, a, gamma, delta)
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn branch(&self) -> Branch {
        Branch::of(self.alpha)
    }
}

/// A validated elliptical pathway law with its factorization and constant.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticalPathway {
    params: EllipticalPathwayParams,
    /// Cholesky factor of V.
    factor: DMatrix<f64>,
    ln_det_v: f64,
    radial: PowerKernel,
    ln_norm: f64,
}

impl EllipticalPathway {
    pub fn new(params: EllipticalPathwayParams) -> Result<Self> {
        let p = params.dim();
        if p == 0 {
            return domain("dimension p must be at least 1");
        }
        if params.v.nrows() != p || params.v.ncols() != p {
            return domain(format!("V is {}x{} but mu has length {p}", params.v.nrows(), params.v.ncols()));
        }
        if params.mu.iter().any(|m| !m.is_finite()) {
            return domain("mu must be finite");
        }
        if !(params.gamma >= 0.0) {
            return domain(format!("gamma must be >= 0, got {}", params.gamma));
        }
        let factor = spd_factor(&params.v)?;
        let ln_det_v = ln_det_from_factor(&factor);
        let pf = p as f64;
        let radial = PowerKernel::new(params.alpha, params.a, params.gamma + pf / 2.0 - 1.0, params.delta)?;
        let ln_norm = radial.ln_norm() - ln_stiefel_constant(p) - 0.5 * ln_det_v;
        Ok(Self { params, factor, ln_det_v, radial, ln_norm })
    }

    pub fn params(&self) -> &EllipticalPathwayParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    pub fn norm_const(&self) -> f64 {
        self.ln_norm.exp()
    }

    pub fn ln_norm_const(&self) -> f64 {
        self.ln_norm
    }

    /// The constant rebuilt from the polar-coordinate route: the density of
    /// `r = √u` is a power kernel with exponent `p - 1 + 2γ` and stretch `2δ`,
    /// and the angular integral contributes the unit-sphere surface area.
    pub fn ln_norm_const_polar(&self) -> Result<f64> {
        let p = self.dim();
        let pr = &self.params;
        let r_kernel = PowerKernel::new(pr.alpha, pr.a, p as f64 - 1.0 + 2.0 * pr.gamma, 2.0 * pr.delta)?;
        Ok(r_kernel.ln_norm() - sphere_surface_factor(p)?.ln() - 0.5 * self.ln_det_v)
    }

    /// (X-μ)ᵀ V⁻¹ (X-μ) by triangular solve.
    pub fn quadratic_form(&self, x: &DVector<f64>) -> Result<f64> {
        if x.len() != self.dim() {
            return domain(format!("point has length {} but p = {}", x.len(), self.dim()));
        }
        Ok(mahalanobis_sq(&self.factor, &(x - &self.params.mu)))
    }

    pub fn log_pdf(&self, x: &DVector<f64>) -> Result<f64> {
        let u = self.quadratic_form(x)?;
        if !u.is_finite() {
            return Ok(f64::NEG_INFINITY);
        }
        if u == 0.0 {
            return Ok(if self.params.gamma > 0.0 { f64::NEG_INFINITY } else { self.ln_norm });
        }
        let power = if self.params.gamma == 0.0 { 0.0 } else { self.params.gamma * u.ln() };
        Ok(self.ln_norm + power + self.radial.ln_bracket(u))
    }

    pub fn pdf(&self, x: &DVector<f64>) -> Result<f64> {
        self.log_pdf(x).map(f64::exp)
    }

    /// Law of the quadratic form u.
    pub fn radial(&self) -> RadialDensity {
        RadialDensity { kernel: self.radial }
    }

    /// E[u^k]; the α > 1 branch needs `1/(α-1) > (γ + p/2 + k)/δ`.
    pub fn radial_moment(&self, k: f64) -> Result<f64> {
        if !(k >= 0.0) {
            return domain(format!("moment order must be >= 0, got {k}"));
        }
        self.radial.ln_moment(k).map(f64::exp)
    }

    /// n draws `μ + L(√u ω)` with ω uniform on the unit sphere and u from the radial law.
    pub fn sample(&self, n: usize, stream: &mut RandomStream) -> Vec<DVector<f64>> {
        let p = self.dim();
        (0..n)
            .map(|_| {
                let u = self.radial.sample(stream);
                let omega = unit_direction(p, stream);
                &self.params.mu + &self.factor * (omega * u.sqrt())
            })
            .collect()
    }
}

/// Density of `u = (X-μ)ᵀV⁻¹(X-μ)`:
/// `g(u) = C̃ u^{γ+p/2-1} [1 - a(1-α) u^δ]^{1/(1-α)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialDensity {
    kernel: PowerKernel,
}

impl RadialDensity {
    /// The constant C̃ of g.
    pub fn normalizer(&self) -> f64 {
        self.kernel.ln_norm().exp()
    }

    pub fn log_pdf(&self, u: f64) -> f64 {
        self.kernel.ln_pdf(u)
    }

    /// P(u' <= u) by quadrature.
    pub fn cdf(&self, u: f64) -> Result<f64> {
        let sup = self.support();
        if u <= sup.lower {
            return Ok(0.0);
        }
        if u >= sup.upper {
            return Ok(1.0);
        }
        let q = integrate_with_breaks(|t| self.kernel.pdf(t), 0.0, u, &[], CDF_TOL)?;
        Ok(q.value.clamp(0.0, 1.0))
    }

    pub fn moment(&self, k: f64) -> Result<f64> {
        self.kernel.ln_moment(k).map(f64::exp)
    }

    pub fn sample(&self, stream: &mut RandomStream) -> f64 {
        self.kernel.sample(stream)
    }
}

impl Density for RadialDensity {
    fn pdf(&self, u: f64) -> f64 {
        self.kernel.pdf(u)
    }

    fn support(&self) -> Support {
        Support { lower: 0.0, upper: self.kernel.upper() }
    }
}

/// Normalizing constant C* of the elliptical density.
pub fn norm_const(params: &EllipticalPathwayParams) -> Result<f64> {
    EllipticalPathway::new(params.clone()).map(|d| d.norm_const())
}

pub fn pdf(params: &EllipticalPathwayParams, x: &DVector<f64>) -> Result<f64> {
    EllipticalPathway::new(params.clone())?.pdf(x)
}

/// Density of the quadratic form at `u`.
pub fn radial_pdf(params: &EllipticalPathwayParams, u: f64) -> Result<f64> {
    EllipticalPathway::new(params.clone()).map(|d| d.radial().pdf(u))
}

pub fn radial_moment(params: &EllipticalPathwayParams, k: f64) -> Result<f64> {
    EllipticalPathway::new(params.clone())?.radial_moment(k)
}

pub fn sample(params: &EllipticalPathwayParams, n: usize, stream: &mut RandomStream) -> Result<Vec<DVector<f64>>> {
    EllipticalPathway::new(params.clone()).map(|d| d.sample(n, stream))
}

/// Surface area 2π^{p/2}/Γ(p/2) of the unit sphere in ℝ^p (2 points for p = 1).
pub fn sphere_surface_factor(p: usize) -> Result<f64> {
    if p == 0 {
        return domain("dimension p must be at least 1");
    }
    Ok((2f64.ln() + ln_stiefel_constant(p)).exp())
}

/// The multiplier `u ↦ π^{p/2}/Γ(p/2) · u^{p/2-1}` in `dY = factor(u) du`.
pub fn stiefel_radial_factor(p: usize) -> Result<impl Fn(f64) -> f64> {
    if p == 0 {
        return domain("dimension p must be at least 1");
    }
    let c = ln_stiefel_constant(p).exp();
    let e = p as f64 / 2.0 - 1.0;
    Ok(move |u: f64| c * u.powf(e))
}

/// ln(π^{p/2}/Γ(p/2)).
fn ln_stiefel_constant(p: usize) -> f64 {
    let h = p as f64 / 2.0;
    h * ln_pi() - ln_gamma_unchecked(h)
}

fn unit_direction(p: usize, stream: &mut RandomStream) -> DVector<f64> {
    loop {
        let g = DVector::from_fn(p, |_, _| stream.standard_normal());
        let norm = g.norm();
        if norm > 0.0 {
            return g / norm;
        }
    }
}
