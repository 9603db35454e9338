//! Maximum-likelihood fitting of the scalar pathway family.
//!
//! Nelder–Mead simplex search in unconstrained coordinates:
//! `a = e^θ`, `δ = e^θ`, `γ = θ²`, and α mapped through a logistic onto
//! `(ALPHA_MIN, 1 + δ/(γ+1))`, whose upper end is the normalizability bound of
//! the type-2 branch for the current (γ, δ). Points whose type-1 support does
//! not cover the data have likelihood zero and are rejected by the simplex.

use super::{Density, PathwayDensity, ScalarPathwayParams};
use crate::error::{domain, Error, Result};
use crate::kernel::Branch;

/// Lower end of the α search interval.
pub const ALPHA_MIN: f64 = -9.0;
const MAX_ITER_PER_DIM: usize = 1000;
const F_TOL: f64 = 1e-11;
const X_TOL: f64 = 1e-9;
// Logistic arguments beyond this put α within ~3e-7 of an end of its interval.
const BOUNDARY_LOGIT: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    Alpha,
    A,
    Gamma,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleFit {
    pub params: ScalarPathwayParams,
    pub log_likelihood: f64,
    /// The optimum sits on (or numerically at) the edge of the feasible region.
    pub at_boundary: bool,
    pub iterations: usize,
}

/// Local maximizer of Σ ln f(x_i) over the parameters not listed in `fixed`,
/// starting from `init`.
pub fn mle_fit(data: &[f64], fixed: &[Param], init: ScalarPathwayParams) -> Result<MleFit> {
    if data.len() < 10 {
        return domain(format!("need at least 10 observations, got {}", data.len()));
    }
    if data.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return domain("observations must be positive and finite");
    }
    let first = data[0];
    if data.iter().all(|&x| x == first) {
        return Err(Error::DegenerateData("all observations are equal".into()));
    }
    init.validate()?;
    let max = data.iter().copied().fold(0.0, f64::max);

    let coords = Coords { fixed: fixed.to_vec(), base: init };
    let objective = |theta: &[f64]| -> f64 {
        match coords.decode(theta) {
            Some(p) => match log_likelihood(data, p) {
                Some(ll) => -ll,
                None => f64::INFINITY,
            },
            None => f64::INFINITY,
        }
    };

    let start = coords.encode(init);
    if start.is_empty() {
        let ll =
            log_likelihood(data, init).ok_or_else(|| Error::Domain("data lie outside the support of init".into()))?;
        return Ok(MleFit { params: init, log_likelihood: ll, at_boundary: false, iterations: 0 });
    }
    if !objective(&start).is_finite() {
        return domain("data lie outside the support of the initial parameters");
    }

    let (mut best, mut iterations) = nelder_mead(&objective, &start, 0.5);
    // One restart from the optimum guards against a collapsed simplex.
    let (restarted, more) = nelder_mead(&objective, &best, 0.1);
    iterations += more;
    if objective(&restarted) <= objective(&best) {
        best = restarted;
    }
    let params = coords.decode(&best).expect("best vertex is feasible");
    let ll = -objective(&best);

    let mut at_boundary = coords.alpha_logit(&best).is_some_and(|t| t.abs() > BOUNDARY_LOGIT);
    if let Ok(d) = PathwayDensity::new(params) {
        if d.branch() == Branch::Type1 {
            let upper = d.support().upper;
            at_boundary |= max / upper > 1.0 - 1e-6;
        }
    }
    Ok(MleFit { params, log_likelihood: ll, at_boundary, iterations })
}

/// Σ ln f(x_i), or None when some observation has zero density.
pub fn log_likelihood(data: &[f64], params: ScalarPathwayParams) -> Option<f64> {
    let d = PathwayDensity::new(params).ok()?;
    let mut ll = 0.0;
    for &x in data {
        let l = d.log_pdf(x);
        if !l.is_finite() {
            return None;
        }
        ll += l;
    }
    Some(ll)
}

struct Coords {
    fixed: Vec<Param>,
    base: ScalarPathwayParams,
}

impl Coords {
    fn free(&self, p: Param) -> bool {
        !self.fixed.contains(&p)
    }

    // Order of free coordinates: a, gamma, delta, alpha.
    fn encode(&self, p: ScalarPathwayParams) -> Vec<f64> {
        let mut v = Vec::new();
        if self.free(Param::A) {
            v.push(p.a.ln());
        }
        if self.free(Param::Gamma) {
            v.push(p.gamma.sqrt());
        }
        if self.free(Param::Delta) {
            v.push(p.delta.ln());
        }
        if self.free(Param::Alpha) {
            let hi = alpha_max(p.gamma, p.delta);
            let frac = ((p.alpha - ALPHA_MIN) / (hi - ALPHA_MIN)).clamp(1e-9, 1.0 - 1e-9);
            v.push((frac / (1.0 - frac)).ln());
        }
        v
    }

    fn decode(&self, theta: &[f64]) -> Option<ScalarPathwayParams> {
        let mut it = theta.iter().copied();
        let mut p = self.base;
        if self.free(Param::A) {
            p.a = it.next()?.exp();
        }
        if self.free(Param::Gamma) {
            let t = it.next()?;
            p.gamma = t * t;
        }
        if self.free(Param::Delta) {
            p.delta = it.next()?.exp();
        }
        if self.free(Param::Alpha) {
            let hi = alpha_max(p.gamma, p.delta);
            let t = it.next()?;
            p.alpha = ALPHA_MIN + (hi - ALPHA_MIN) / (1.0 + (-t).exp());
        }
        let finite = p.a.is_finite() && p.a > 0.0 && p.delta.is_finite() && p.delta > 0.0;
        finite.then_some(p)
    }

    fn alpha_logit(&self, theta: &[f64]) -> Option<f64> {
        self.free(Param::Alpha).then(|| *theta.last().expect("alpha is the last coordinate"))
    }
}

fn alpha_max(gamma: f64, delta: f64) -> f64 {
    1.0 + delta / (gamma + 1.0)
}

/// Minimizes `f` from `start`; returns the best vertex and iteration count.
fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, start: &[f64], step: f64) -> (Vec<f64>, usize) {
    let n = start.len();
    let mut simplex: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += step;
        if !f(&v).is_finite() {
            v[i] = start[i] - step;
        }
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let max_iter = MAX_ITER_PER_DIM * n;
    let mut iter = 0;
    while iter < max_iter {
        iter += 1;
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let (lo, hi) = (values[0], values[n]);
        let spread = (hi - lo).abs();
        let diameter = simplex[1..]
            .iter()
            .map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if hi.is_finite() && spread <= F_TOL * (lo.abs() + F_TOL) && diameter <= X_TOL.max(1e-6) {
            break;
        }

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (w - c)).collect() };

        let reflected = along(-1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[n] {
            let c = along(-0.5);
            let fc = f(&c);
            (c, fc)
        } else {
            let c = along(0.5);
            let fc = f(&c);
            (c, fc)
        };
        if fc < values[n].min(fr) {
            simplex[n] = contracted;
            values[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].clone();
        for i in 1..=n {
            let v: Vec<f64> = simplex[i].iter().zip(&best).map(|(x, b)| b + 0.5 * (x - b)).collect();
            values[i] = f(&v);
            simplex[i] = v;
        }
    }
    let best = (0..=n).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap_or(0);
    (simplex[best].clone(), iter)
}
