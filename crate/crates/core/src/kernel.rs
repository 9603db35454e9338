//! The one-dimensional pathway kernel on `x > 0`,
//!
//! ```text
//! x^e · [1 - a(1-α) x^δ]^{1/(1-α)}    α < 1, 0 < x < [a(1-α)]^{-1/δ}
//! x^e · exp(-a x^δ)                    α = 1
//! x^e · [1 + a(α-1) x^δ]^{-1/(α-1)}    α > 1
//! ```
//!
//! with exponent `e > -1`. The scalar pathway family is this kernel with
//! `e = γ`; the radial law of the elliptical family uses `e = γ + p/2 - 1`.
//! With `z = a|1-α| x^δ` (or `z = a x^δ` when α = 1) the kernel becomes a
//! type-1 beta, type-2 beta or gamma kernel in `z` with first shape
//! `s = (e+1)/δ`, which gives the normalizing constants and the samplers.

use crate::error::{domain, Error, Result};
use crate::numerics::{ln_gamma_unchecked, RandomStream};

/// |α - 1| below this is treated as the α = 1 (generalized gamma) limit.
pub const ALPHA_ONE_BAND: f64 = 1e-6;

/// Which of the three families a pathway parameter selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// α < 1: bounded support, type-1 beta form.
    Type1,
    /// α = 1: generalized gamma form.
    Gamma,
    /// α > 1: heavy tail, type-2 beta form.
    Type2,
}

impl Branch {
    pub fn of(alpha: f64) -> Branch {
        if (alpha - 1.0).abs() < ALPHA_ONE_BAND {
            Branch::Gamma
        } else if alpha < 1.0 {
            Branch::Type1
        } else {
            Branch::Type2
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PowerKernel {
    alpha: f64,
    a: f64,
    exponent: f64,
    delta: f64,
    branch: Branch,
    /// a|1-α|, or a on the gamma branch.
    rate: f64,
    /// 1/|1-α| (unused on the gamma branch).
    eta: f64,
    ln_norm: f64,
}

impl PowerKernel {
    pub(crate) fn new(alpha: f64, a: f64, exponent: f64, delta: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return domain(format!("alpha must be finite, got {alpha}"));
        }
        if !(a > 0.0) || !a.is_finite() {
            return domain(format!("scale a must be positive, got {a}"));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return domain(format!("delta must be positive, got {delta}"));
        }
        if !(exponent > -1.0) || !exponent.is_finite() {
            return domain(format!("power exponent must exceed -1, got {exponent}"));
        }
        let branch = Branch::of(alpha);
        let s = (exponent + 1.0) / delta;
        let (rate, eta, ln_norm) = match branch {
            Branch::Gamma => (a, f64::INFINITY, delta.ln() + s * a.ln() - ln_gamma_unchecked(s)),
            Branch::Type1 => {
                let eta = 1.0 / (1.0 - alpha);
                let rate = a * (1.0 - alpha);
                let ln_c = delta.ln() + s * rate.ln() + ln_gamma_unchecked(s + eta + 1.0)
                    - ln_gamma_unchecked(s)
                    - ln_gamma_unchecked(eta + 1.0);
                (rate, eta, ln_c)
            }
            Branch::Type2 => {
                let eta = 1.0 / (alpha - 1.0);
                if !(eta - s > 0.0) {
                    return Err(Error::NonNormalizable(format!(
                        "alpha = {alpha} needs 1/(alpha-1) = {eta} > (e+1)/delta = {s}"
                    )));
                }
                let rate = a * (alpha - 1.0);
                let ln_c = delta.ln() + s * rate.ln() + ln_gamma_unchecked(eta)
                    - ln_gamma_unchecked(s)
                    - ln_gamma_unchecked(eta - s);
                (rate, eta, ln_c)
            }
        };
        Ok(Self { alpha, a, exponent, delta, branch, rate, eta, ln_norm })
    }

    pub(crate) fn branch(&self) -> Branch {
        self.branch
    }

    /// First shape (e+1)/δ of the beta/gamma kernel in z.
    pub(crate) fn shape(&self) -> f64 {
        (self.exponent + 1.0) / self.delta
    }

    pub(crate) fn ln_norm(&self) -> f64 {
        self.ln_norm
    }

    /// Upper end of the support.
    pub(crate) fn upper(&self) -> f64 {
        match self.branch {
            Branch::Type1 => self.rate.powf(-1.0 / self.delta),
            _ => f64::INFINITY,
        }
    }

    /// ln of the un-normalized kernel; -inf off the support.
    pub(crate) fn ln_kernel(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return f64::NEG_INFINITY;
        }
        let power = if self.exponent == 0.0 { 0.0 } else { self.exponent * x.ln() };
        power + self.ln_bracket(x)
    }

    /// ln of the kernel without its power factor; -inf past the type-1 edge.
    pub(crate) fn ln_bracket(&self, x: f64) -> f64 {
        let xd = x.powf(self.delta);
        match self.branch {
            Branch::Gamma => -self.a * xd,
            Branch::Type1 => {
                let base = 1.0 - self.rate * xd;
                if base <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    self.eta * base.ln()
                }
            }
            Branch::Type2 => -self.eta * (self.rate * xd).ln_1p(),
        }
    }

    pub(crate) fn ln_pdf(&self, x: f64) -> f64 {
        let k = self.ln_kernel(x);
        if k == f64::NEG_INFINITY {
            k
        } else {
            self.ln_norm + k
        }
    }

    pub(crate) fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    /// Exact draw via the beta/gamma representation of z.
    pub(crate) fn sample(&self, stream: &mut RandomStream) -> f64 {
        let s = self.shape();
        let z = match self.branch {
            Branch::Gamma => stream.gamma(s),
            Branch::Type1 => {
                let g1 = stream.gamma(s);
                let g2 = stream.gamma(self.eta + 1.0);
                g1 / (g1 + g2)
            }
            Branch::Type2 => {
                let g1 = stream.gamma(s);
                let g2 = stream.gamma(self.eta - s);
                g1 / g2
            }
        };
        (z / self.rate).powf(1.0 / self.delta)
    }

    /// ln E[x^k], or a divergence error when the moment does not exist.
    pub(crate) fn ln_moment(&self, k: f64) -> Result<f64> {
        if !(self.exponent + k > -1.0) {
            return Err(Error::Divergence(format!("moment of order {k} diverges at the origin")));
        }
        let shifted = match PowerKernel::new(self.alpha, self.a, self.exponent + k, self.delta) {
            Ok(p) => p,
            Err(Error::NonNormalizable(_)) => {
                return Err(Error::Divergence(format!("moment of order {k} does not exist for alpha = {}", self.alpha)))
            }
            Err(e) => return Err(e),
        };
        Ok(self.ln_norm - shifted.ln_norm)
    }
}
