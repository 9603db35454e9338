//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Exits 0 so that a failing criterion is reported without aborting the rest
//! of `cargo test`; set `ACCEPTANCE_STRICT=1` to exit 1 when any line fails.

use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use pathway::matrix::{MatrixPathway, MatrixPathwayParams};
use pathway::multivariate::{EllipticalPathway, EllipticalPathwayParams};
use pathway::numerics::{integrate_1d, integrate_with_breaks, ks_critical_1pct, ks_statistic};
use pathway::scalar::entropy::{entropy_m, entropy_m_discrete, entropy_t};
use pathway::scalar::stationarity::{euler_stationarity_residual, interior_grid};
use pathway::scalar::{Density, PathwayDensity, ScalarPathwayParams};
use pathway::scaling::{dea, gen_series, levy_walk_delta, sda, DeaConfig, GeneratorSpec};
use pathway::{Error, RandomStream};

const ALPHAS: [f64; 6] = [0.2, 0.5, 0.9, 1.0, 1.2, 1.5];
const SCALES: [f64; 3] = [0.5, 1.0, 2.0];
const GAMMAS: [f64; 3] = [0.0, 1.0, 2.5];
const DELTAS: [f64; 3] = [0.5, 1.0, 2.0];
const SCALING_SEEDS: [u64; 3] = [1, 2, 3];

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn valid_grid() -> Vec<PathwayDensity> {
    let mut out = Vec::new();
    for alpha in ALPHAS {
        for a in SCALES {
            for gamma in GAMMAS {
                for delta in DELTAS {
                    match PathwayDensity::new(ScalarPathwayParams::new(alpha, a, gamma, delta)) {
                        Ok(d) => out.push(d),
                        Err(Error::NonNormalizable(_)) => {}
                        Err(e) => panic!("grid point ({alpha}, {a}, {gamma}, {delta}): {e}"),
                    }
                }
            }
        }
    }
    out
}

fn scalar_normalization() -> Outcome {
    let start = Instant::now();
    let grid = valid_grid();
    let mut worst: f64 = 0.0;
    let mut errors = 0;
    for d in &grid {
        let sup = d.support();
        match integrate_1d(|x| d.pdf(x), sup.lower, sup.upper, 1e-11) {
            Ok(total) => worst = worst.max((total - 1.0).abs()),
            Err(_) => errors += 1,
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-8 && errors == 0 && elapsed < Duration::from_secs(30),
        format!(
            "{} grid points, max |integral - 1| = {worst:.2e}, {errors} quadrature errors, {elapsed:.1?}",
            grid.len()
        ),
    )
}

fn entropy_closed_forms() -> Outcome {
    let exp1 = PathwayDensity::new(ScalarPathwayParams::exponential(1.0)).unwrap();
    let mut worst_m: f64 = 0.0;
    let mut worst_t: f64 = 0.0;
    let mut worst_d: f64 = 0.0;
    for alpha in [0.5, 0.9, 1.1, 1.5] {
        let m = entropy_m(&exp1, alpha).map_or(f64::INFINITY, |m| (m - 1.0 / (2.0 - alpha)).abs());
        let t = entropy_t(&exp1, alpha).map_or(f64::INFINITY, |t| (t - 1.0 / alpha).abs());
        worst_m = worst_m.max(m);
        worst_t = worst_t.max(t);
        for k in [2usize, 10] {
            let p = vec![1.0 / k as f64; k];
            let want = ((k as f64).powf(alpha - 1.0) - 1.0) / (alpha - 1.0);
            let d = entropy_m_discrete(&p, alpha).map_or(f64::INFINITY, |m| (m - want).abs());
            worst_d = worst_d.max(d);
        }
    }
    outcome(
        worst_m <= 1e-6 && worst_t <= 1e-6 && worst_d <= 1e-12,
        format!("M_alpha err {worst_m:.2e}, T_alpha err {worst_t:.2e}, discrete uniform err {worst_d:.2e}"),
    )
}

fn trichotomy() -> Outcome {
    let (a, gamma, delta) = (1.0, 1.0, 2.0);
    let eps = 1e-4;
    let scalar = |alpha: f64| PathwayDensity::new(ScalarPathwayParams::new(alpha, a, gamma, delta)).unwrap();
    let (lo, mid, hi) = (scalar(1.0 - eps), scalar(1.0), scalar(1.0 + eps));
    let mut gap: f64 = 0.0;
    for k in 1..=200 {
        let x = 4.0 * k as f64 / 200.0;
        gap = gap.max((lo.pdf(x) - mid.pdf(x)).abs()).max((hi.pdf(x) - mid.pdf(x)).abs());
    }
    let rel = |c: f64, c3: f64| ((c - c3) / c3).abs();
    let scalar_gap = rel(lo.normalizing_constant(), mid.normalizing_constant())
        .max(rel(hi.normalizing_constant(), mid.normalizing_constant()));
    let multi = |alpha: f64| {
        EllipticalPathway::new(EllipticalPathwayParams::standard(2, alpha, a, gamma, delta)).unwrap().norm_const()
    };
    let c3 = multi(1.0);
    let multi_gap = rel(multi(1.0 - eps), c3).max(rel(multi(1.0 + eps), c3));
    outcome(
        gap <= 1e-3 && scalar_gap <= 1e-3 && multi_gap <= 1e-3,
        format!("sup pdf gap {gap:.2e}; constant gaps: scalar {scalar_gap:.2e}, p=2 C1*/C2* vs C3* {multi_gap:.2e}"),
    )
}

fn random_spd(p: usize, s: &mut RandomStream) -> DMatrix<f64> {
    let m = DMatrix::from_fn(p, p, |_, _| s.standard_normal());
    &m * m.transpose() + DMatrix::identity(p, p) * 0.3
}

fn multivariate_gaussian() -> Outcome {
    let mut s = RandomStream::new(4);
    let v = random_spd(3, &mut s);
    let mu = DVector::from_fn(3, |_, _| s.standard_normal());
    let d = EllipticalPathway::new(EllipticalPathwayParams::new(mu.clone(), v.clone(), 1.0, 0.5, 0.0, 1.0)).unwrap();
    let inv = v.clone().try_inverse().unwrap();
    let det = v.determinant();
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let x = &mu + DVector::from_fn(3, |_, _| s.standard_normal());
        let r = &x - &mu;
        let q = (r.transpose() * &inv * &r)[(0, 0)];
        let want = (-0.5 * q).exp() / ((2.0 * std::f64::consts::PI).powf(1.5) * det.sqrt());
        worst = worst.max((d.pdf(&x).unwrap() - want).abs() / want);
    }
    outcome(worst <= 1e-10, format!("max relative error {worst:.2e} over 10 points"))
}

fn radial_consistency() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, (alpha, a, gamma, delta)) in [(0.6, 1.0, 1.0, 1.5), (1.2, 1.0, 0.5, 1.0)].into_iter().enumerate() {
        let d = EllipticalPathway::new(EllipticalPathwayParams::standard(2, alpha, a, gamma, delta)).unwrap();
        let xs = d.sample(100_000, &mut RandomStream::new(500 + i as u64));
        let us: Vec<f64> = xs.iter().map(|x| d.quadratic_form(x).unwrap()).collect();
        let n = us.len() as f64;
        let mean = us.iter().sum::<f64>() / n;
        let se = (us.iter().map(|u| (u - mean) * (u - mean)).sum::<f64>() / (n - 1.0) / n).sqrt();
        let want = d.radial_moment(1.0).unwrap();
        let z = (mean - want) / se;
        let r = d.radial();
        let stat = ks_statistic(&us, |u| r.cdf(u).unwrap()).unwrap();
        let crit = ks_critical_1pct(us.len());
        pass &= z.abs() <= 3.0 && stat < crit;
        parts.push(format!("alpha={alpha}: E[u] z = {z:+.2}, KS {stat:.4} (crit {crit:.4})"));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    outcome(pass, format!("{}; {elapsed:.1?}", parts.join("; ")))
}

fn spd(k: usize, seed: u64) -> DMatrix<f64> {
    let mut s = RandomStream::new(seed);
    let m = DMatrix::from_fn(k, k, |_, _| s.standard_normal());
    &m * m.transpose() / k as f64 + DMatrix::identity(k, k) * 0.5
}

fn matrix_constants() -> Outcome {
    let start = Instant::now();
    let mut worst_mc: f64 = 0.0;
    let mut pass = true;
    for (i, (p, n)) in [(1, 1), (2, 2), (2, 3)].into_iter().enumerate() {
        for (j, alpha) in [0.5, 0.75, 1.0].into_iter().enumerate() {
            let params = MatrixPathwayParams::new(spd(p, 30 + i as u64), spd(n, 40 + i as u64), alpha, 1.0, 0.5);
            let m = MatrixPathway::new(params).unwrap();
            let (mass, _) = m.mc_total_mass(1_000_000, &RandomStream::new(700 + 10 * i as u64 + j as u64)).unwrap();
            worst_mc = worst_mc.max((mass - 1.0).abs());
        }
    }
    pass &= worst_mc <= 0.02;
    let mut worst_q: f64 = 0.0;
    for alpha in [0.5, 0.75, 1.0] {
        let (av, bv) = (1.7, 0.6);
        let m = MatrixPathway::new(MatrixPathwayParams::new(
            DMatrix::from_element(1, 1, av),
            DMatrix::from_element(1, 1, bv),
            alpha,
            1.0,
            0.5,
        ))
        .unwrap();
        let f = |x: f64| m.pdf(&DMatrix::from_element(1, 1, x)).unwrap();
        // |W|^γ = (x² A B)^γ has a kink at x = 0
        let edge = if alpha < 1.0 { 1.0 / ((1.0 - alpha) * av * bv).sqrt() } else { f64::INFINITY };
        let total = integrate_with_breaks(f, -edge, edge, &[0.0], 1e-12).map(|q| q.value);
        worst_q = worst_q.max(total.map_or(f64::INFINITY, |t| (t - 1.0).abs()));
    }
    pass &= worst_q <= 1e-8;
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(300);
    outcome(
        pass,
        format!("max |MC mass - 1| = {worst_mc:.4} over 9 cases at 1e6 draws; 1x1 quadrature err {worst_q:.2e}; {elapsed:.1?}"),
    )
}

fn euler_stationarity() -> Outcome {
    let mut worst: f64 = 0.0;
    let grid = valid_grid();
    for d in &grid {
        let p = d.params();
        let r = interior_grid(p, 64).and_then(|g| euler_stationarity_residual(p, &g)).unwrap_or(f64::INFINITY);
        worst = worst.max(r);
    }
    outcome(worst <= 1e-9, format!("max residual {worst:.2e} over {} grid points", grid.len()))
}

fn gaussian_baseline() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for seed in SCALING_SEEDS {
        let start = Instant::now();
        let s = gen_series(GeneratorSpec::Gaussian { sigma: 1.0 }, 1 << 16, &mut RandomStream::new(seed)).unwrap();
        let cfg = DeaConfig::default();
        let d = dea(&s, &cfg).unwrap().delta;
        let h = sda(&s, &cfg).unwrap().hurst;
        let elapsed = start.elapsed();
        pass &= (d - 0.5).abs() <= 0.03 && (h - 0.5).abs() <= 0.03 && elapsed < Duration::from_secs(60);
        parts.push(format!("seed {seed}: delta {d:.4}, H {h:.4} ({elapsed:.1?})"));
    }
    outcome(pass, parts.join("; "))
}

fn levy_walk_relation() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for seed in SCALING_SEEDS {
        let s =
            gen_series(GeneratorSpec::LevyWalk { mu: 2.5, speed: 1.0 }, 1 << 17, &mut RandomStream::new(seed)).unwrap();
        let cfg = DeaConfig::default();
        let d = dea(&s, &cfg).unwrap().delta;
        let h = sda(&s, &cfg).unwrap().hurst;
        let gap = levy_walk_delta(h).map_or(f64::INFINITY, |p| (d - p).abs());
        pass &= gap <= 0.08;
        parts.push(format!("seed {seed}: delta {d:.4}, H {h:.4}, gap {gap:.4}"));
    }
    outcome(pass, parts.join("; "))
}

fn levy_flight_divergence() -> Outcome {
    let s = gen_series(
        GeneratorSpec::LevyFlight { mu: 2.2, scale: 1.0 },
        1 << 17,
        &mut RandomStream::new(SCALING_SEEDS[0]),
    )
    .unwrap();
    let cfg = DeaConfig::default();
    let d = dea(&s, &cfg).unwrap().delta;
    let h = sda(&s, &cfg).unwrap().hurst;
    outcome(d >= 0.6 && (d - h).abs() >= 0.08, format!("delta {d:.4}, H {h:.4}, |delta - H| = {:.4}", (d - h).abs()))
}

fn cli_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_pathway");
    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("series.csv");
    let series = series.to_str().unwrap();
    let run = |args: &[&str]| {
        let out = Command::new(exe).args(args).output().unwrap();
        (out.status.code(), out.stdout)
    };
    let invocations: Vec<Vec<&str>> = vec![
        vec!["synth", "--generator", "levy-walk", "--n", "20000", "--seed", "11", "--out", series],
        vec!["synth", "--generator", "gaussian", "--n", "500", "--seed", "11"],
        vec!["dea", "--input", series, "--seed", "11"],
        vec!["sda", "--input", series, "--seed", "11"],
    ];
    let mut pass = true;
    let mut bytes = 0;
    for args in &invocations {
        let (c1, a) = run(args);
        let (c2, b) = run(args);
        pass &= c1 == Some(0) && c2 == Some(0) && a == b && !a.is_empty();
        bytes += a.len();
    }
    outcome(pass, format!("{} invocations run twice, {bytes} bytes of JSON compared", invocations.len()))
}

fn main() {
    let criteria: [(&str, Check); 11] = [
        ("scalar normalization", scalar_normalization),
        ("entropy closed forms", entropy_closed_forms),
        ("pathway trichotomy", trichotomy),
        ("multivariate Gaussian special case", multivariate_gaussian),
        ("radial consistency", radial_consistency),
        ("matrix-variate constants", matrix_constants),
        ("Euler stationarity", euler_stationarity),
        ("DEA/SDA Gaussian baseline", gaussian_baseline),
        ("Levy-walk relation", levy_walk_relation),
        ("Levy-flight method divergence", levy_flight_divergence),
        ("CLI determinism", cli_determinism),
    ];
    let mut passed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        passed += o.pass as usize;
        println!("[{}] {:>2}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if strict && passed < criteria.len() {
        std::process::exit(1);
    }
}
