//! Synthetic increment series with known scaling.

use super::TimeSeries;
use crate::error::{domain, Result};
use crate::numerics::RandomStream;
use crate::scalar::{PathwayDensity, ScalarPathwayParams};

/// Which generator [`gen_series`] runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorSpec {
    /// iid N(0, σ²).
    Gaussian { sigma: f64 },
    /// iid symmetric steps whose density decays like |ξ|^{-μ}: a random sign
    /// times `scale` times a type-2 pathway draw with γ = 0, δ = 1,
    /// α = 1 + 1/μ.
    LevyFlight { mu: f64, scale: f64 },
    /// Steps ±v with the sign held over flights whose durations τ ≥ 1 have
    /// P(τ ≥ k) = k^{-(μ-1)}, i.e. a duration density ∝ τ^{-μ}.
    LevyWalk { mu: f64, speed: f64 },
    /// Pathway draws with a random sign.
    PathwaySteps(ScalarPathwayParams),
}

/// `n` increments from `spec`, consuming `stream`.
pub fn gen_series(spec: GeneratorSpec, n: usize, stream: &mut RandomStream) -> Result<TimeSeries> {
    if n < 2 {
        return domain(format!("series length must be >= 2, got {n}"));
    }
    let values = match spec {
        GeneratorSpec::Gaussian { sigma } => {
            positive("sigma", sigma)?;
            (0..n).map(|_| sigma * stream.standard_normal()).collect()
        }
        GeneratorSpec::LevyFlight { mu, scale } => {
            if !(mu > 1.0) || !mu.is_finite() {
                return domain(format!("tail exponent mu must exceed 1, got {mu}"));
            }
            positive("scale", scale)?;
            let d = PathwayDensity::new(ScalarPathwayParams::new(1.0 + 1.0 / mu, 1.0, 0.0, 1.0))?;
            symmetrized(&d, scale, n, stream)
        }
        GeneratorSpec::LevyWalk { mu, speed } => {
            if !(mu > 1.0) || !mu.is_finite() {
                return domain(format!("duration exponent mu must exceed 1, got {mu}"));
            }
            positive("speed", speed)?;
            let mut out = Vec::with_capacity(n);
            while out.len() < n {
                let step = speed * stream.sign();
                let tau = flight_duration(mu, stream).min((n - out.len()) as u64);
                out.extend(std::iter::repeat_n(step, tau as usize));
            }
            out
        }
        GeneratorSpec::PathwaySteps(params) => {
            let d = PathwayDensity::new(params)?;
            symmetrized(&d, 1.0, n, stream)
        }
    };
    TimeSeries::new(values)
}

/// One flight duration `floor(U^{-1/(μ-1)})`, so that `P(τ ≥ k) = k^{-(μ-1)}`
/// for integers k ≥ 1; saturates at `u64::MAX`.
pub fn flight_duration(mu: f64, stream: &mut RandomStream) -> u64 {
    let u = stream.uniform_open();
    let t = u.powf(-1.0 / (mu - 1.0)).floor();
    if t >= u64::MAX as f64 {
        u64::MAX
    } else {
        t as u64
    }
}

fn symmetrized(d: &PathwayDensity, scale: f64, n: usize, stream: &mut RandomStream) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let x = d.draw(stream);
            stream.sign() * scale * x
        })
        .collect()
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} must be positive, got {v}"))
    }
}
