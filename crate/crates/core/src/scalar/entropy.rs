//! Generalized entropy measures.
//!
//! * `M_α(f) = (∫ f^{2-α} - 1) / (α - 1)`, which tends to Shannon entropy as α → 1
//! * `T_α(f) = (∫ f^α - 1) / (1 - α)` (Tsallis)
//! * the α-generalized Kerridge inaccuracy `(∫ P Q^{1-α} - 1) / (α - 1)`,
//!   tending to `-∫ P ln Q`
//!
//! All integrals run over the density's support by quadrature. At α = 1
//! exactly, every measure returns its Shannon/Kerridge limit.

use std::cell::Cell;

use super::{Density, Support};
use crate::error::{domain, Error, Result};
use crate::numerics::{fixed_width_histogram, integrate_with_breaks};

const ENTROPY_TOL: f64 = 1e-12;

fn integrate_over<F: Fn(f64) -> f64>(f: F, support: Support) -> Result<f64> {
    match integrate_with_breaks(f, support.lower, support.upper, &[], ENTROPY_TOL) {
        Ok(q) => Ok(q.value),
        Err(Error::Divergence(msg)) => Err(Error::Divergence(msg)),
        Err(Error::Accuracy { estimate, error }) if error > 1e-6 * estimate.abs().max(1.0) => {
            Err(Error::Divergence(format!("integral did not settle (estimate {estimate}, error {error})")))
        }
        // converged to well below anything the measures are used at
        Err(Error::Accuracy { estimate, .. }) => Ok(estimate),
        Err(e) => Err(e),
    }
}

/// ∫ f^q over the support, with 0^q := 0.
fn power_integral<D: Density + ?Sized>(density: &D, q: f64) -> Result<f64> {
    integrate_over(
        |x| {
            let p = density.pdf(x);
            if p > 0.0 {
                p.powf(q)
            } else {
                0.0
            }
        },
        density.support(),
    )
}

/// `M_α(f)`; α = 1 gives the Shannon entropy.
pub fn entropy_m<D: Density + ?Sized>(density: &D, alpha: f64) -> Result<f64> {
    if alpha == 1.0 {
        return shannon_entropy(density);
    }
    check_alpha(alpha)?;
    Ok((power_integral(density, 2.0 - alpha)? - 1.0) / (alpha - 1.0))
}

/// `T_α(f)`; α = 1 gives the Shannon entropy.
pub fn entropy_t<D: Density + ?Sized>(density: &D, alpha: f64) -> Result<f64> {
    if alpha == 1.0 {
        return shannon_entropy(density);
    }
    check_alpha(alpha)?;
    Ok((power_integral(density, alpha)? - 1.0) / (1.0 - alpha))
}

/// `-∫ f ln f`.
pub fn shannon_entropy<D: Density + ?Sized>(density: &D) -> Result<f64> {
    integrate_over(
        |x| {
            let p = density.pdf(x);
            if p > 0.0 {
                -p * p.ln()
            } else {
                0.0
            }
        },
        density.support(),
    )
}

/// Discrete `M_α(p) = (Σ p_i^{2-α} - 1)/(α - 1)`; α = 1 gives `-Σ p ln p`.
pub fn entropy_m_discrete(p: &[f64], alpha: f64) -> Result<f64> {
    if p.is_empty() {
        return domain("empty probability vector");
    }
    if p.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return domain("probabilities must be positive");
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return domain(format!("probabilities sum to {total}, not 1"));
    }
    if alpha == 1.0 {
        return Ok(-p.iter().map(|x| x * x.ln()).sum::<f64>());
    }
    check_alpha(alpha)?;
    let s: f64 = p.iter().map(|x| x.powf(2.0 - alpha)).sum();
    Ok((s - 1.0) / (alpha - 1.0))
}

const MISMATCH_REL: f64 = 1e-10;

/// α-generalized Kerridge inaccuracy of assuming `q` when `p` is true;
/// α = 1 gives `-∫ p ln q`.
pub fn kerridge_inaccuracy<P, Q>(p: &P, q: &Q, alpha: f64) -> Result<f64>
where
    P: Density + ?Sized,
    Q: Density + ?Sized,
{
    check_alpha(alpha)?;
    let (sp, sq) = (p.support(), q.support());
    if sp.lower < sq.lower || sp.upper > sq.upper {
        return domain(format!(
            "support of Q [{}, {}] does not cover support of P [{}, {}]",
            sq.lower, sq.upper, sp.lower, sp.upper
        ));
    }
    // Largest P value seen, and largest P value where Q underflowed or vanished.
    let peak = Cell::new(0.0f64);
    let mismatch = Cell::new(0.0f64);
    let integrand = |x: f64| {
        let pv = p.pdf(x);
        if !(pv > 0.0) {
            return 0.0;
        }
        peak.set(peak.get().max(pv));
        let qv = q.pdf(x);
        if !(qv > 0.0) {
            mismatch.set(mismatch.get().max(pv));
            return 0.0;
        }
        if alpha == 1.0 {
            -pv * qv.ln()
        } else {
            pv * qv.powf(1.0 - alpha)
        }
    };
    let value = integrate_over(integrand, sp);
    // Far in a tail Q may underflow while P is still a subnormal-scale number;
    // only a zero of Q where P carries real weight is an error.
    if mismatch.get() > MISMATCH_REL * peak.get() {
        return domain("Q vanishes on a region where P is positive");
    }
    let value = value?;
    if alpha == 1.0 {
        Ok(value)
    } else {
        Ok((value - 1.0) / (alpha - 1.0))
    }
}

/// Histogram plug-in estimates of the entropy measures from samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleEntropy {
    pub shannon: f64,
    pub m_alpha: f64,
    pub t_alpha: f64,
    pub bin_width: f64,
    pub bins: usize,
}

/// Plug-in estimator: bin probabilities p_j with width h stand in for the
/// density value p_j / h, so ∫ f^q ≈ Σ p_j^q h^{1-q} and the Shannon entropy
/// becomes `-Σ p_j ln p_j + ln h`.
pub fn entropy_from_samples(data: &[f64], bin_width: f64, alpha: f64) -> Result<SampleEntropy> {
    if alpha != 1.0 {
        check_alpha(alpha)?;
    }
    let bins = fixed_width_histogram(data, bin_width, 0.0)?;
    let n = data.len() as f64;
    let probs: Vec<f64> = bins.iter().map(|b| b.1 as f64 / n).collect();
    let h = bin_width;
    let shannon = -probs.iter().map(|p| p * p.ln()).sum::<f64>() + h.ln();
    let (m_alpha, t_alpha) = if alpha == 1.0 {
        (shannon, shannon)
    } else {
        let sm: f64 = probs.iter().map(|p| p.powf(2.0 - alpha)).sum::<f64>() * h.powf(alpha - 1.0);
        let st: f64 = probs.iter().map(|p| p.powf(alpha)).sum::<f64>() * h.powf(1.0 - alpha);
        ((sm - 1.0) / (alpha - 1.0), (st - 1.0) / (1.0 - alpha))
    };
    Ok(SampleEntropy { shannon, m_alpha, t_alpha, bin_width: h, bins: bins.len() })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() {
        return domain(format!("alpha must be finite, got {alpha}"));
    }
    Ok(())
}
