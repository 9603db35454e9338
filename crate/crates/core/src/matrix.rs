//! Rectangular matrix-variate pathway model.
//!
//! For a p×n matrix `X` of full rank p (n ≥ p) with SPD constants `A` (p×p)
//! and `B` (n×n), put `W = A^{1/2} X B Xᵀ A^{1/2}` and
//!
//! ```text
//! f(X) = Ĉ |W|^γ |I - a(1-α) W|^{1/(1-α)}     α < 1, I - a(1-α)W > O
//! f(X) = Ĉ |W|^γ |I + a(α-1) W|^{-1/(α-1)}    α > 1
//! f(X) = Ĉ |W|^γ exp(-a tr W)                 α = 1 (the eigenvalue-wise limit)
//! ```
//!
//! The constant comes from `Y = A^{1/2} X B^{1/2}` (`dY = |A|^{n/2}|B|^{p/2} dX`),
//! then `S = YYᵀ` (`dY = π^{np/2}/Γ_p(n/2) |S|^{n/2-(p+1)/2} dS`), which leaves a
//! real matrix-variate beta or gamma integral in S. With `ρ = γ + n/2`,
//! `b = a|1-α|`, `η = 1/|1-α|` and `B_p(x, y) = Γ_p(x)Γ_p(y)/Γ_p(x+y)`:
//!
//! ```text
//! Ĉ = |A|^{n/2} |B|^{p/2} Γ_p(n/2) / π^{np/2} × { b^{pρ} / B_p(ρ, η + (p+1)/2)   α < 1
//!                                                { a^{pρ} / Γ_p(ρ)               α = 1
//!                                                { b^{pρ} / B_p(ρ, η - ρ)         α > 1
//! ```
//!
//! The type-2 integral converges only when `η - ρ > (p-1)/2`, i.e.
//! `1/(α-1) > γ + n/2 + (p-1)/2`.

use nalgebra::DMatrix;

use crate::error::{domain, Error, Result};
use crate::kernel::Branch;
use crate::numerics::{
    ln_det_from_factor, ln_gamma_unchecked, ln_matrix_gamma, ln_pi, mc_mean_split, spd_factor, try_cholesky,
    RandomStream,
};

/// Constants (A, B) and shape (α, a, γ) of the matrix-variate model.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPathwayParams {
    /// p×p SPD.
    pub a_mat: DMatrix<f64>,
    /// n×n SPD.
    pub b_mat: DMatrix<f64>,
    pub alpha: f64,
    pub a: f64,
    pub gamma: f64,
}

impl MatrixPathwayParams {
    pub fn new(a_mat: DMatrix<f64>, b_mat: DMatrix<f64>, alpha: f64, a: f64, gamma: f64) -> Self {
        Self { a_mat, b_mat, alpha, a, gamma }
    }

    /// A = I_p, B = I_n.
    pub fn identity(p: usize, n: usize, alpha: f64, a: f64, gamma: f64) -> Self {
        Self::new(DMatrix::identity(p, p), DMatrix::identity(n, n), alpha, a, gamma)
    }

    pub fn p(&self) -> usize {
        self.a_mat.nrows()
    }

    pub fn n(&self) -> usize {
        self.b_mat.nrows()
    }

    pub fn branch(&self) -> Branch {
        Branch::of(self.alpha)
    }
}

/// A validated matrix-variate law with factors and constant precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPathway {
    params: MatrixPathwayParams,
    /// Cholesky factors of A and B.
    l_a: DMatrix<f64>,
    l_b: DMatrix<f64>,
    ln_jacobian: f64,
    ln_norm: f64,
}

impl MatrixPathway {
    pub fn new(params: MatrixPathwayParams) -> Result<Self> {
        let (p, n) = (params.p(), params.n());
        if p == 0 || n < p {
            return domain(format!("need 1 <= p <= n, got p = {p}, n = {n}"));
        }
        let (alpha, a, gamma) = (params.alpha, params.a, params.gamma);
        if !alpha.is_finite() {
            return domain(format!("alpha must be finite, got {alpha}"));
        }
        if !(a > 0.0) || !a.is_finite() {
            return domain(format!("scale a must be positive, got {a}"));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return domain(format!("gamma must be >= 0, got {gamma}"));
        }
        let l_a = spd_factor(&params.a_mat)?;
        let l_b = spd_factor(&params.b_mat)?;
        let ln_jacobian = ln_jacobian(&l_a, &l_b);

        let (pf, nf) = (p as f64, n as f64);
        let rho = gamma + nf / 2.0;
        let ln_tail = match Branch::of(alpha) {
            Branch::Gamma => pf * rho * a.ln() - ln_matrix_gamma(p, rho)?,
            Branch::Type1 => {
                let eta = 1.0 / (1.0 - alpha);
                let b = a * (1.0 - alpha);
                pf * rho * b.ln() - ln_matrix_beta(p, rho, eta + (pf + 1.0) / 2.0)?
            }
            Branch::Type2 => {
                let eta = 1.0 / (alpha - 1.0);
                let second = eta - rho;
                if !(second > (pf - 1.0) / 2.0) {
                    return Err(Error::NonNormalizable(format!(
                        "alpha = {alpha} needs 1/(alpha-1) = {eta} > gamma + n/2 + (p-1)/2 = {}",
                        rho + (pf - 1.0) / 2.0
                    )));
                }
                let b = a * (alpha - 1.0);
                pf * rho * b.ln() - ln_matrix_beta(p, rho, second)?
            }
        };
        let ln_norm = ln_jacobian + ln_matrix_gamma(p, nf / 2.0)? - nf * pf / 2.0 * ln_pi() + ln_tail;
        Ok(Self { params, l_a, l_b, ln_jacobian, ln_norm })
    }

    pub fn params(&self) -> &MatrixPathwayParams {
        &self.params
    }

    pub fn norm_const(&self) -> f64 {
        self.ln_norm.exp()
    }

    pub fn ln_norm_const(&self) -> f64 {
        self.ln_norm
    }

    /// |A|^{n/2} |B|^{p/2}.
    pub fn jacobian_factor(&self) -> f64 {
        self.ln_jacobian.exp()
    }

    /// `Lᵀ X B Xᵀ L` with `A = L Lᵀ`; same eigenvalues as `A^{1/2} X B Xᵀ A^{1/2}`.
    pub fn w_matrix(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let (p, n) = (self.params.p(), self.params.n());
        if x.nrows() != p || x.ncols() != n {
            return domain(format!("X must be {p}x{n}, got {}x{}", x.nrows(), x.ncols()));
        }
        let y = self.l_a.transpose() * x;
        let w = &y * &self.params.b_mat * y.transpose();
        // symmetrize away rounding
        Ok((&w + w.transpose()) * 0.5)
    }

    /// ln of the kernel; -inf off the support or where `|W| = 0` and γ > 0.
    pub fn ln_kernel(&self, x: &DMatrix<f64>) -> Result<f64> {
        let w = self.w_matrix(x)?;
        if w.iter().any(|v| !v.is_finite()) {
            // overflowed far in the tail, where every normalizable kernel vanishes
            return Ok(f64::NEG_INFINITY);
        }
        let p = w.nrows();
        let (alpha, a, gamma) = (self.params.alpha, self.params.a, self.params.gamma);
        let det_part = if gamma == 0.0 {
            0.0
        } else {
            match try_cholesky(w.clone()) {
                Some(l) => gamma * ln_det_from_factor(&l),
                None => return Ok(f64::NEG_INFINITY),
            }
        };
        let bracket = match Branch::of(alpha) {
            Branch::Gamma => -a * w.trace(),
            Branch::Type1 => {
                let b = a * (1.0 - alpha);
                let m = DMatrix::identity(p, p) - w * b;
                match try_cholesky(m) {
                    Some(l) => ln_det_from_factor(&l) / (1.0 - alpha),
                    None => return Ok(f64::NEG_INFINITY),
                }
            }
            Branch::Type2 => {
                let b = a * (alpha - 1.0);
                let m = DMatrix::identity(p, p) + w * b;
                let l = try_cholesky(m).expect("I + bW is positive definite for PSD W");
                -ln_det_from_factor(&l) / (alpha - 1.0)
            }
        };
        Ok(det_part + bracket)
    }

    pub fn kernel_eval(&self, x: &DMatrix<f64>) -> Result<f64> {
        self.ln_kernel(x).map(f64::exp)
    }

    pub fn pdf(&self, x: &DMatrix<f64>) -> Result<f64> {
        Ok((self.ln_norm + self.ln_kernel(x)?).exp())
    }

    /// Monte-Carlo estimate (with standard error) of `∫ Ĉ · kernel(X) dX`,
    /// which is 1 when the constant is right.
    ///
    /// Every branch samples a proposal Y and maps it to X = L_A^{-T} Y L_B^{-1},
    /// so that W = YYᵀ. α < 1 draws Y uniformly from the Frobenius ball of
    /// radius sqrt(min(p, n)/b), which contains the support ‖Y‖₂² < 1/b.
    /// α = 1 uses iid normal entries; α > 1 the matching multivariate Cauchy,
    /// whose tails dominate the polynomial decay of the kernel.
    pub fn mc_total_mass(&self, draws: usize, stream: &RandomStream) -> Result<(f64, f64)> {
        let (p, n) = (self.params.p(), self.params.n());
        let d = p * n;
        let df = d as f64;
        let chunks = 64;
        let (alpha, a, gamma) = (self.params.alpha, self.params.a, self.params.gamma);
        let l_a_t_inv = self.l_a.transpose().try_inverse().expect("triangular factor is invertible");
        let l_b_inv = self.l_b.clone().try_inverse().expect("triangular factor is invertible");
        let branch = Branch::of(alpha);
        // density of Y, then in X through dY = |A|^{n/2}|B|^{p/2} dX
        let (radius, sigma) = match branch {
            Branch::Type1 => (((p.min(n)) as f64 / (a * (1.0 - alpha))).sqrt(), 1.0),
            _ => (f64::INFINITY, ((1.0 + 2.0 * gamma / n as f64) / a).sqrt()),
        };
        let ln_ball = df / 2.0 * ln_pi() + df * radius.ln() - ln_gamma_unchecked(df / 2.0 + 1.0);
        let ln_proposal = |y: &DMatrix<f64>| -> f64 {
            let ln_y = match branch {
                Branch::Type1 => -ln_ball,
                Branch::Gamma => {
                    let q = y.norm_squared() / (sigma * sigma);
                    -df / 2.0 * (2.0 * std::f64::consts::PI).ln() - q / 2.0 - df * sigma.ln()
                }
                Branch::Type2 => {
                    let q = y.norm_squared() / (sigma * sigma);
                    ln_gamma_unchecked((1.0 + df) / 2.0)
                        - ln_gamma_unchecked(0.5)
                        - df / 2.0 * ln_pi()
                        - (1.0 + df) / 2.0 * q.ln_1p()
                        - df * sigma.ln()
                }
            };
            ln_y + self.ln_jacobian
        };
        let sampler = |s: &mut RandomStream| {
            let z = DMatrix::from_fn(p, n, |_, _| s.standard_normal());
            match branch {
                Branch::Type1 => {
                    let r = radius * s.uniform_open().powf(1.0 / df);
                    let norm = z.norm();
                    z * (r / norm)
                }
                Branch::Gamma => z * sigma,
                Branch::Type2 => {
                    let scale = sigma / s.standard_normal().abs();
                    z * scale
                }
            }
        };
        let f = |y: &DMatrix<f64>| {
            let x = &l_a_t_inv * y * &l_b_inv;
            let lk = self.ln_kernel(&x).unwrap_or(f64::NEG_INFINITY);
            (self.ln_norm + lk - ln_proposal(y)).exp()
        };
        mc_mean_split(f, sampler, draws, stream, chunks)
    }
}

/// |A|^{n/2} |B|^{p/2} with p, n the orders of A and B.
pub fn jacobian_factor(a_mat: &DMatrix<f64>, b_mat: &DMatrix<f64>) -> Result<f64> {
    let l_a = spd_factor(a_mat)?;
    let l_b = spd_factor(b_mat)?;
    Ok(ln_jacobian(&l_a, &l_b).exp())
}

pub fn norm_const(params: &MatrixPathwayParams) -> Result<f64> {
    MatrixPathway::new(params.clone()).map(|m| m.norm_const())
}

pub fn kernel_eval(params: &MatrixPathwayParams, x: &DMatrix<f64>) -> Result<f64> {
    MatrixPathway::new(params.clone())?.kernel_eval(x)
}

pub fn pdf(params: &MatrixPathwayParams, x: &DMatrix<f64>) -> Result<f64> {
    MatrixPathway::new(params.clone())?.pdf(x)
}

fn ln_jacobian(l_a: &DMatrix<f64>, l_b: &DMatrix<f64>) -> f64 {
    let (p, n) = (l_a.nrows() as f64, l_b.nrows() as f64);
    n / 2.0 * ln_det_from_factor(l_a) + p / 2.0 * ln_det_from_factor(l_b)
}

fn ln_matrix_beta(p: usize, x: f64, y: f64) -> Result<f64> {
    Ok(ln_matrix_gamma(p, x)? + ln_matrix_gamma(p, y)? - ln_matrix_gamma(p, x + y)?)
}
