//! Double-exponential quadrature.
//!
//! Finite intervals use the tanh-sinh rule, half-infinite intervals the
//! exp-sinh rule `x = a + exp(π/2 · sinh t)`. Both cluster nodes doubly
//! exponentially toward the endpoints, which is what makes integrable endpoint
//! singularities (x^-1/2, log terms, non-smooth support edges) cheap. Each level
//! halves the step and reuses all previous nodes; the difference between two
//! consecutive levels is the error estimate.
//!
//! Interior kinks or singularities must be passed as breakpoints so that they
//! land on an endpoint of some sub-interval.

use std::f64::consts::FRAC_PI_2;

use crate::error::{domain, Error, Result};

const MAX_LEVEL: u32 = 12;
const MIN_LEVEL: u32 = 4;
// Beyond these |t| the nodes coincide with the endpoint (tanh-sinh) or the
// exponent leaves the f64 range (exp-sinh).
const T_MAX_FINITE: f64 = 6.8;
const T_MAX_HALF_LINE: f64 = 6.7;

/// Value and error estimate of a converged integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Integrates `f` over `[lower, upper]`; either limit may be infinite.
///
/// Converges when the error estimate is within `tol` absolutely or relatively,
/// whichever is larger. Otherwise returns [`Error::Accuracy`] with the best
/// estimate.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, lower: f64, upper: f64, tol: f64) -> Result<f64> {
    integrate_with_breaks(f, lower, upper, &[], tol).map(|q| q.value)
}

/// As [`integrate_1d`], splitting the range at each interior breakpoint.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    upper: f64,
    breaks: &[f64],
    tol: f64,
) -> Result<Quadrature> {
    if lower.is_nan() || upper.is_nan() || !(tol > 0.0) {
        return domain("integration limits must be numbers and tol must be positive");
    }
    if lower > upper {
        return integrate_with_breaks(f, upper, lower, breaks, tol).map(|q| Quadrature { value: -q.value, ..q });
    }
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|b| b.is_finite() && *b > lower && *b < upper).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    if lower == f64::NEG_INFINITY && upper == f64::INFINITY && cuts.is_empty() {
        cuts.push(0.0);
    }

    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(lower);
    edges.extend(cuts);
    edges.push(upper);

    let mut total = Quadrature { value: 0.0, error: 0.0, evaluations: 0 };
    let mut failed = false;
    // Tolerance is split evenly across pieces.
    let pieces = (edges.len() - 1) as f64;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b {
            continue;
        }
        let piece = match (a.is_finite(), b.is_finite()) {
            (true, true) => tanh_sinh(&f, a, b, tol / pieces),
            (true, false) => exp_sinh(&f, a, tol / pieces),
            (false, true) => exp_sinh(|x| f(-x), -b, tol / pieces),
            (false, false) => unreachable!("split at zero above"),
        };
        match piece {
            Ok(q) => accumulate(&mut total, q),
            Err(Error::Accuracy { estimate, error }) => {
                failed = true;
                accumulate(&mut total, Quadrature { value: estimate, error, evaluations: 0 });
            }
            Err(e) => return Err(e),
        }
    }
    if failed {
        return Err(Error::Accuracy { estimate: total.value, error: total.error });
    }
    Ok(total)
}

fn accumulate(total: &mut Quadrature, q: Quadrature) {
    total.value += q.value;
    total.error += q.error;
    total.evaluations += q.evaluations;
}

fn tanh_sinh<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    let half = 0.5 * (b - a);
    // Node pair at ±t; the offsets from each endpoint are computed directly so
    // nodes close to an endpoint keep full relative precision.
    let node_pair = |t: f64| -> Result<f64> {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        let offset = 2.0 * half * e / (1.0 + e);
        let cu = u.cosh();
        let w = half * FRAC_PI_2 * t.cosh() / (cu * cu);
        if t == 0.0 {
            return eval(f, a + half, w);
        }
        let (lo, hi) = (a + offset, b - offset);
        let mut s = 0.0;
        if lo > a && lo < b {
            s += eval(f, lo, w)?;
        }
        if hi < b && hi > a {
            s += eval(f, hi, w)?;
        }
        Ok(s)
    };
    refine(node_pair, T_MAX_FINITE, tol)
}

fn exp_sinh<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> Result<Quadrature> {
    let node = |t: f64| -> Result<f64> {
        let u = FRAC_PI_2 * t.sinh();
        let d = u.exp();
        let x = a + d;
        if !(x > a) || !x.is_finite() {
            return Ok(0.0);
        }
        let w = FRAC_PI_2 * t.cosh() * d;
        eval(&f, x, w)
    };
    // exp-sinh is not symmetric in t, so visit t and -t separately.
    let pair = |t: f64| -> Result<f64> {
        if t == 0.0 {
            node(0.0)
        } else {
            Ok(node(t)? + node(-t)?)
        }
    };
    refine(pair, T_MAX_HALF_LINE, tol)
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64, w: f64) -> Result<f64> {
    let y = f(x);
    if !y.is_finite() {
        return Err(Error::Divergence(format!("integrand is {y} at x = {x}")));
    }
    let term = w * y;
    Ok(if term.is_finite() { term } else { 0.0 })
}

/// Trapezoid sums on t in [-t_max, t_max] with step 2^-level, reusing nodes.
fn refine<P: Fn(f64) -> Result<f64>>(pair: P, t_max: f64, tol: f64) -> Result<Quadrature> {
    let mut h = 1.0;
    let mut sum = pair(0.0)?;
    let mut evaluations = 1;
    let mut k = 1.0;
    while k * h <= t_max {
        sum += pair(k * h)?;
        evaluations += 2;
        k += 1.0;
    }
    let mut estimate = h * sum;
    let mut error = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut j = 1.0;
        while j * h <= t_max {
            sum += pair(j * h)?;
            evaluations += 2;
            j += 2.0;
        }
        let next = h * sum;
        error = (next - estimate).abs();
        estimate = next;
        if level >= MIN_LEVEL && error <= tol.max(tol * estimate.abs()) {
            // Mass still arriving at the truncation edge means the integral
            // diverges (or decays too slowly to be captured).
            let edge = pair(t_max.floor())?.abs();
            if edge > tol.max(tol * estimate.abs()) {
                return Err(Error::Divergence(format!(
                    "integrand does not decay toward the integration limits (edge term {edge:e})"
                )));
            }
            return Ok(Quadrature { value: estimate, error, evaluations });
        }
    }
    Err(Error::Accuracy { estimate, error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::ln_beta;
    use std::f64::consts::PI;

    #[test]
    fn constant_on_unit_interval() {
        let v = integrate_1d(|_| 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exponential_half_line() {
        let v = integrate_1d(|x| (-x).exp(), 0.0, f64::INFINITY, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
    }

    #[test]
    fn arcsine_endpoint_singularities() {
        let v = integrate_1d(|x| 1.0 / (x * (1.0 - x)).sqrt(), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - PI).abs() < 1e-7, "{v}");
    }

    #[test]
    fn beta_integrals() {
        for a in [0.5, 1.0, 2.5] {
            for b in [0.5, 1.0, 2.5] {
                let tol = 1e-9;
                let v = integrate_1d(|x: f64| x.powf(a - 1.0) * (1.0 - x).powf(b - 1.0), 0.0, 1.0, tol).unwrap();
                let want = ln_beta(a, b).unwrap().exp();
                // b < 1 puts the singularity on the upper endpoint where node
                // abscissae carry an absolute rounding of one ulp.
                let slack = if b < 1.0 { 1e-7 } else { tol };
                assert!((v - want).abs() <= slack.max(slack * want), "a={a} b={b}: {v} vs {want}");
            }
        }
    }

    #[test]
    fn algebraic_tail() {
        // ∫_0^∞ (1 + x)^-2.5 dx = 1/1.5
        let v = integrate_1d(|x| (1.0 + x).powf(-2.5), 0.0, f64::INFINITY, 1e-12).unwrap();
        assert!((v - 1.0 / 1.5).abs() < 1e-12);
    }

    #[test]
    fn whole_line_gaussian() {
        let v = integrate_1d(|x| (-0.5 * x * x).exp(), f64::NEG_INFINITY, f64::INFINITY, 1e-12).unwrap();
        assert!((v - (2.0 * PI).sqrt()).abs() < 1e-11);
    }

    #[test]
    fn breakpoint_kink() {
        let q = integrate_with_breaks(|x: f64| (x - 0.3).abs(), 0.0, 1.0, &[0.3], 1e-12).unwrap();
        assert!((q.value - (0.045 + 0.245)).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_negate() {
        let v = integrate_1d(|x| x, 1.0, 0.0, 1e-12).unwrap();
        assert!((v + 0.5).abs() < 1e-14);
    }

    #[test]
    fn non_integrable_reports_accuracy_or_divergence() {
        let r = integrate_1d(|x| 1.0 / x, 0.0, 1.0, 1e-10);
        assert!(matches!(r, Err(Error::Accuracy { .. }) | Err(Error::Divergence(_))), "{r:?}");
        let r = integrate_1d(|x| 1.0 / (1.0 + x), 0.0, f64::INFINITY, 1e-10);
        assert!(matches!(r, Err(Error::Accuracy { .. }) | Err(Error::Divergence(_))), "{r:?}");
    }
}
