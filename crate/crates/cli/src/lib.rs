//! Command-line front end for the `pathway` crate.
//!
//! Every subcommand prints one JSON report on stdout:
//! `{"command", "params", "result", "warnings", "seed"}`. Diagnostics go to
//! stderr. Exit codes: 0 success, 1 computation or input error, 2 usage error.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{DMatrix, DVector};
use pathway::matrix::{MatrixPathway, MatrixPathwayParams};
use pathway::multivariate::{EllipticalPathway, EllipticalPathwayParams};
use pathway::scalar::entropy::{entropy_from_samples, entropy_m, entropy_t, shannon_entropy};
use pathway::scalar::fit::{mle_fit, Param};
use pathway::scalar::{PathwayDensity, ScalarPathwayParams};
use pathway::scaling::{dea, gen_series, sda, DeaConfig, GeneratorSpec, TimeSeries};
use pathway::{Branch, RandomStream};
use serde::Serialize;
use serde_json::{json, Value};

/// Seed used when neither `--seed` nor `--seedless` is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

const POOR_FIT_R2: f64 = 0.9;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{origin}: parse error at line {line}: {msg}")]
    Parse { origin: String, line: usize, msg: String },
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error(transparent)]
    Compute(#[from] pathway::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pathway", version, about = "Pathway densities, entropies and DEA/SDA scaling analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Random seed (64-bit unsigned).
    #[arg(long, global = true, conflicts_with = "seedless")]
    seed: Option<u64>,
    /// Do not record a seed; stochastic commands draw one from the clock.
    #[arg(long, global = true)]
    seedless: bool,
    /// Also write the point table as CSV to this path.
    #[arg(long, global = true)]
    points_out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a scalar or elliptical density at points.
    Pdf(PdfArgs),
    /// Draw from a scalar or elliptical model.
    Sample(SampleArgs),
    /// Entropy measures of a scalar model or of data.
    Entropy(EntropyArgs),
    /// Diffusion Entropy Analysis of a series file.
    Dea(AnalysisArgs),
    /// Standard Deviation Analysis of a series file.
    Sda(AnalysisArgs),
    /// Generate a synthetic increment series.
    Synth(SynthArgs),
    /// Maximum-likelihood fit of the scalar model.
    Fit(FitArgs),
    /// Matrix-variate constant, kernel and density.
    MatrixPdf(MatrixArgs),
}

#[derive(Debug, Args, Serialize)]
struct ModelArgs {
    /// Pathway parameter α.
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// Scale a > 0.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Power exponent γ >= 0.
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Stretch exponent δ > 0.
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
}

impl ModelArgs {
    fn scalar(&self) -> ScalarPathwayParams {
        ScalarPathwayParams::new(self.alpha, self.a, self.gamma, self.delta)
    }
}

/// Elliptical location/scatter; supplying any of these switches to the
/// p-variate model.
#[derive(Debug, Args, Serialize)]
struct EllipticalArgs {
    /// Dimension p.
    #[arg(long)]
    p: Option<usize>,
    /// Location vector, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// Scatter matrix V, rows separated by ';', entries by ','.
    #[arg(long, allow_hyphen_values = true)]
    scale: Option<String>,
}

impl EllipticalArgs {
    fn is_set(&self) -> bool {
        self.p.is_some() || self.mu.is_some() || self.scale.is_some()
    }

    fn params(&self, m: &ModelArgs) -> Result<EllipticalPathwayParams, CliError> {
        let mu = self.mu.as_deref().map(|s| parse_vector(s, "--mu")).transpose()?;
        let v = self.scale.as_deref().map(|s| parse_inline_matrix(s, "--scale")).transpose()?;
        let p = self.p.or(mu.as_ref().map(|m| m.len())).or(v.as_ref().map(|v| v.nrows())).unwrap_or(1);
        let mu = mu.unwrap_or_else(|| DVector::zeros(p));
        let v = v.unwrap_or_else(|| DMatrix::identity(p, p));
        if mu.len() != p || v.nrows() != p || v.ncols() != p {
            return Err(CliError::Usage(format!(
                "dimension mismatch: p = {p}, mu has {} entries, scale is {}x{}",
                mu.len(),
                v.nrows(),
                v.ncols()
            )));
        }
        Ok(EllipticalPathwayParams::new(mu, v, m.alpha, m.a, m.gamma, m.delta))
    }
}

#[derive(Debug, Args, Serialize)]
struct PdfArgs {
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    #[serde(flatten)]
    elliptical: EllipticalArgs,
    /// Evaluation points: comma separated scalars, or ';'-separated vectors.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "grid")]
    x: Option<String>,
    /// Scalar grid `lo,hi,count` (inclusive, evenly spaced).
    #[arg(long, conflicts_with = "x")]
    grid: Option<String>,
}

#[derive(Debug, Args, Serialize)]
struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    #[serde(flatten)]
    elliptical: EllipticalArgs,
    /// Number of draws.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Write draws as CSV (one per row) instead of embedding them in the report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct EntropyArgs {
    /// Entropy order for M_α and T_α (1 gives the Shannon entropy).
    #[arg(long, default_value_t = 1.0)]
    order: f64,
    /// Data file; when absent the model given by --alpha etc. is used.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Histogram bin width for data (default: standard deviation / bin fraction).
    #[arg(long)]
    bin_width: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    bin_fraction: f64,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "input")]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
}

#[derive(Debug, Args, Serialize)]
struct AnalysisArgs {
    /// Series file ('-' for stdin).
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    window: WindowArgs,
}

#[derive(Debug, Args, Serialize)]
struct WindowArgs {
    /// Smallest window size.
    #[arg(long, default_value_t = 10)]
    t_min: usize,
    /// Largest window size (further capped at N/10).
    #[arg(long)]
    t_max: Option<usize>,
    /// Number of log-spaced window sizes.
    #[arg(long, default_value_t = 25)]
    windows: usize,
    /// κ in the DEA bin width h = s/κ.
    #[arg(long, default_value_t = 10.0)]
    bin_fraction: f64,
    /// Overlapping (stride-1) windows; the default.
    #[arg(long, overrides_with = "no_overlap")]
    #[serde(skip)]
    overlap: bool,
    /// Disjoint windows.
    #[arg(long, overrides_with = "overlap")]
    no_overlap: bool,
}

impl WindowArgs {
    fn config(&self) -> DeaConfig {
        DeaConfig {
            t_min: self.t_min,
            t_max: self.t_max.unwrap_or(usize::MAX),
            n_window_sizes: self.windows,
            bin_fraction: self.bin_fraction,
            overlap: !self.no_overlap,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Generator {
    Gaussian,
    LevyFlight,
    LevyWalk,
    Pathway,
}

#[derive(Debug, Args, Serialize)]
struct SynthArgs {
    #[arg(long, value_enum)]
    generator: Generator,
    /// Series length.
    #[arg(long, default_value_t = 65_536)]
    n: usize,
    /// Gaussian standard deviation.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Tail exponent (levy-flight) or duration exponent (levy-walk).
    #[arg(long, default_value_t = 2.5)]
    mu: f64,
    /// Step scale of the Lévy flight.
    #[arg(long, default_value_t = 1.0)]
    step_scale: f64,
    /// Walker speed of the Lévy walk.
    #[arg(long, default_value_t = 1.0)]
    speed: f64,
    /// Pathway step parameters (generator `pathway`).
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// Write the series as single-column CSV instead of embedding it in the report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct FitArgs {
    /// Data file of positive observations.
    #[arg(long)]
    input: PathBuf,
    /// Parameters held at their starting values, comma separated (alpha,a,gamma,delta).
    #[arg(long, value_delimiter = ',')]
    fix: Vec<String>,
    /// Starting values.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
}

#[derive(Debug, Args, Serialize)]
struct MatrixArgs {
    /// p×p positive definite A, one row per line.
    #[arg(long)]
    a_matrix: PathBuf,
    /// n×n positive definite B, one row per line.
    #[arg(long)]
    b_matrix: PathBuf,
    /// p×n argument X; when absent only the constant is reported.
    #[arg(long)]
    x: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
}

struct Report {
    result: Value,
    points: Option<(Vec<String>, Vec<Vec<f64>>)>,
    warnings: Vec<String>,
}

/// Runs the command line `argv` (program name first) with the process's
/// stdout and stderr; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(doc) => {
            let text = serde_json::to_string_pretty(&doc).expect("report is valid JSON");
            if writeln!(out, "{text}").is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<Value, CliError> {
    let stochastic = matches!(cli.command, Command::Sample(_) | Command::Synth(_));
    let seed = match (cli.seed, cli.seedless) {
        (Some(s), _) => Some(s),
        (None, false) => Some(DEFAULT_SEED),
        (None, true) if stochastic => Some(clock_seed()),
        (None, true) => None,
    };
    let stream_seed = seed.unwrap_or(DEFAULT_SEED);
    let (name, params, report) = match &cli.command {
        Command::Pdf(a) => ("pdf", to_value(a), pdf_cmd(a)?),
        Command::Sample(a) => ("sample", to_value(a), sample_cmd(a, stream_seed)?),
        Command::Entropy(a) => ("entropy", to_value(a), entropy_cmd(a)?),
        Command::Dea(a) => ("dea", to_value(a), dea_cmd(a)?),
        Command::Sda(a) => ("sda", to_value(a), sda_cmd(a)?),
        Command::Synth(a) => ("synth", to_value(a), synth_cmd(a, stream_seed)?),
        Command::Fit(a) => ("fit", to_value(a), fit_cmd(a)?),
        Command::MatrixPdf(a) => ("matrix-pdf", to_value(a), matrix_cmd(a)?),
    };
    let mut result = report.result;
    if let Some((header, rows)) = &report.points {
        if let Some(path) = &cli.points_out {
            write_csv(path, Some(header), rows)?;
        }
        result["points"] = json!(rows);
    }
    Ok(json!({
        "command": name,
        "params": params,
        "result": result,
        "warnings": report.warnings,
        "seed": seed,
    }))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("arguments serialize")
}

fn clock_seed() -> u64 {
    use std::time::{SystemTime, UNIX_EPOCH};
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos() as u64).unwrap_or(DEFAULT_SEED)
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Type1 => "type1",
        Branch::Gamma => "gamma",
        Branch::Type2 => "type2",
    }
}

fn pdf_cmd(args: &PdfArgs) -> Result<Report, CliError> {
    if args.elliptical.is_set() {
        let d = EllipticalPathway::new(args.elliptical.params(&args.model)?)?;
        let src = args
            .x
            .as_deref()
            .ok_or_else(|| CliError::Usage("--grid is scalar only; give --x for the p-variate model".into()))?;
        let mut rows = Vec::new();
        for (i, chunk) in src.split(';').enumerate() {
            let x = parse_vector(chunk, "--x")?;
            if x.len() != d.dim() {
                return Err(CliError::Usage(format!(
                    "--x point {} has {} coordinates, need {}",
                    i + 1,
                    x.len(),
                    d.dim()
                )));
            }
            let mut row: Vec<f64> = x.iter().copied().collect();
            row.push(d.pdf(&x)?);
            rows.push(row);
        }
        let mut header: Vec<String> = (1..=d.dim()).map(|k| format!("x{k}")).collect();
        header.push("pdf".into());
        Ok(Report {
            result: json!({
                "constant": d.norm_const(),
                "ln_constant": d.ln_norm_const(),
                "branch": branch_name(d.params().branch()),
            }),
            points: Some((header, rows)),
            warnings: vec![],
        })
    } else {
        let d = PathwayDensity::new(args.model.scalar())?;
        let xs = match (&args.x, &args.grid) {
            (Some(x), _) => parse_list(x, "--x")?,
            (None, Some(g)) => parse_grid(g)?,
            (None, None) => unreachable!("clap requires --x or --grid"),
        };
        let rows = xs.iter().map(|&x| vec![x, d.log_pdf(x).exp()]).collect();
        Ok(Report {
            result: json!({
                "constant": d.normalizing_constant(),
                "ln_constant": d.ln_normalizing_constant(),
                "branch": branch_name(d.branch()),
            }),
            points: Some((vec!["x".into(), "pdf".into()], rows)),
            warnings: vec![],
        })
    }
}

fn sample_cmd(args: &SampleArgs, seed: u64) -> Result<Report, CliError> {
    let mut stream = RandomStream::new(seed);
    let rows: Vec<Vec<f64>> = if args.elliptical.is_set() {
        let d = EllipticalPathway::new(args.elliptical.params(&args.model)?)?;
        d.sample(args.n, &mut stream).into_iter().map(|x| x.iter().copied().collect()).collect()
    } else {
        let d = PathwayDensity::new(args.model.scalar())?;
        d.sample(args.n, &mut stream).into_iter().map(|x| vec![x]).collect()
    };
    let dim = rows.first().map_or(0, Vec::len);
    let mean: Vec<f64> = (0..dim).map(|k| rows.iter().map(|r| r[k]).sum::<f64>() / rows.len() as f64).collect();
    let mut result = json!({ "n": args.n, "mean": mean });
    match &args.out {
        Some(path) => write_csv(path, None, &rows)?,
        None if dim == 1 => result["samples"] = json!(rows.iter().map(|r| r[0]).collect::<Vec<_>>()),
        None => result["samples"] = json!(rows),
    }
    Ok(Report { result, points: None, warnings: vec![] })
}

fn entropy_cmd(args: &EntropyArgs) -> Result<Report, CliError> {
    let q = args.order;
    if let Some(path) = &args.input {
        let series = read_series(path)?;
        let h = match args.bin_width {
            Some(h) => h,
            None => series.std_dev() / args.bin_fraction,
        };
        let e = entropy_from_samples(series.values(), h, q)?;
        return Ok(Report {
            result: json!({
                "order": q,
                "shannon": e.shannon,
                "m_alpha": e.m_alpha,
                "t_alpha": e.t_alpha,
                "bin_width": e.bin_width,
                "bins": e.bins,
            }),
            points: None,
            warnings: vec![],
        });
    }
    let alpha = args.alpha.expect("clap requires --alpha without --input");
    let d = PathwayDensity::new(ScalarPathwayParams::new(alpha, args.a, args.gamma, args.delta))?;
    Ok(Report {
        result: json!({
            "order": q,
            "shannon": shannon_entropy(&d)?,
            "m_alpha": entropy_m(&d, q)?,
            "t_alpha": entropy_t(&d, q)?,
        }),
        points: None,
        warnings: vec![],
    })
}

fn window_warnings(n_points: usize, requested: usize, r2: f64) -> Vec<String> {
    let mut w = Vec::new();
    if n_points < requested {
        w.push(format!("{n_points} distinct window sizes out of {requested} requested"));
    }
    if r2 < POOR_FIT_R2 {
        w.push(format!("poor linear fit: r_squared = {r2}"));
    }
    w
}

fn point_rows(points: &[(usize, f64)]) -> Vec<Vec<f64>> {
    points.iter().map(|&(t, v)| vec![t as f64, v]).collect()
}

fn dea_cmd(args: &AnalysisArgs) -> Result<Report, CliError> {
    let series = read_series(&args.input)?;
    let r = dea(&series, &args.window.config())?;
    Ok(Report {
        result: json!({
            "delta": r.delta,
            "intercept": r.intercept,
            "r_squared": r.fit.r_squared,
            "bin_width": r.bin_width,
            "n": series.len(),
        }),
        warnings: window_warnings(r.points.len(), args.window.windows, r.fit.r_squared),
        points: Some((vec!["t".into(), "entropy".into()], point_rows(&r.points))),
    })
}

fn sda_cmd(args: &AnalysisArgs) -> Result<Report, CliError> {
    let series = read_series(&args.input)?;
    let r = sda(&series, &args.window.config())?;
    Ok(Report {
        result: json!({
            "hurst": r.hurst,
            "intercept": r.fit.intercept,
            "r_squared": r.fit.r_squared,
            "n": series.len(),
        }),
        warnings: window_warnings(r.points.len(), args.window.windows, r.fit.r_squared),
        points: Some((vec!["t".into(), "std_dev".into()], point_rows(&r.points))),
    })
}

fn synth_cmd(args: &SynthArgs, seed: u64) -> Result<Report, CliError> {
    let spec = match args.generator {
        Generator::Gaussian => GeneratorSpec::Gaussian { sigma: args.sigma },
        Generator::LevyFlight => GeneratorSpec::LevyFlight { mu: args.mu, scale: args.step_scale },
        Generator::LevyWalk => GeneratorSpec::LevyWalk { mu: args.mu, speed: args.speed },
        Generator::Pathway => {
            GeneratorSpec::PathwaySteps(ScalarPathwayParams::new(args.alpha, args.a, args.gamma, args.delta))
        }
    };
    let series = gen_series(spec, args.n, &mut RandomStream::new(seed))?;
    let mean = series.values().iter().sum::<f64>() / series.len() as f64;
    let mut result = json!({ "n": series.len(), "mean": mean, "std_dev": series.std_dev() });
    match &args.out {
        Some(path) => {
            let rows: Vec<Vec<f64>> = series.values().iter().map(|&v| vec![v]).collect();
            write_csv(path, None, &rows)?;
        }
        None => result["values"] = json!(series.values()),
    }
    Ok(Report { result, points: None, warnings: vec![] })
}

fn fit_cmd(args: &FitArgs) -> Result<Report, CliError> {
    let series = read_series(&args.input)?;
    let fixed = args
        .fix
        .iter()
        .map(|name| match name.trim() {
            "alpha" => Ok(Param::Alpha),
            "a" => Ok(Param::A),
            "gamma" => Ok(Param::Gamma),
            "delta" => Ok(Param::Delta),
            other => Err(CliError::Usage(format!("--fix: unknown parameter '{other}'"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let init = ScalarPathwayParams::new(args.alpha, args.a, args.gamma, args.delta);
    let fit = mle_fit(series.values(), &fixed, init)?;
    let mut warnings = Vec::new();
    if fit.at_boundary {
        warnings.push("optimum is at the boundary of the feasible region".to_string());
    }
    let p = fit.params;
    Ok(Report {
        result: json!({
            "alpha": p.alpha,
            "a": p.a,
            "gamma": p.gamma,
            "delta": p.delta,
            "log_likelihood": fit.log_likelihood,
            "iterations": fit.iterations,
            "at_boundary": fit.at_boundary,
        }),
        points: None,
        warnings,
    })
}

fn matrix_cmd(args: &MatrixArgs) -> Result<Report, CliError> {
    let a_mat = read_matrix(&args.a_matrix)?;
    let b_mat = read_matrix(&args.b_matrix)?;
    let m = MatrixPathway::new(MatrixPathwayParams::new(a_mat, b_mat, args.alpha, args.a, args.gamma))?;
    let mut result = json!({
        "constant": m.norm_const(),
        "ln_constant": m.ln_norm_const(),
        "jacobian": m.jacobian_factor(),
        "branch": branch_name(m.params().branch()),
    });
    if let Some(path) = &args.x {
        let x = read_matrix(path)?;
        result["kernel"] = json!(m.kernel_eval(&x)?);
        result["pdf"] = json!(m.pdf(&x)?);
    }
    Ok(Report { result, points: None, warnings: vec![] })
}

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty())
}

/// Parses a series file: one value per row, or `time,value` rows with
/// increasing time. A first row with a non-numeric field is a header.
pub fn parse_series(text: &str) -> Result<TimeSeries, CliError> {
    parse_series_named(text, "input")
}

fn parse_series_named(text: &str, source: &str) -> Result<TimeSeries, CliError> {
    let perr = |line: usize, msg: String| CliError::Parse { origin: source.to_string(), line, msg };
    let mut values = Vec::new();
    let mut last_time: Option<f64> = None;
    let mut columns: Option<usize> = None;
    let mut first = true;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let row: Vec<&str> = fields(line).collect();
        if row.is_empty() {
            continue;
        }
        let parsed: Vec<Option<f64>> = row.iter().map(|f| f.parse::<f64>().ok()).collect();
        if std::mem::take(&mut first) && parsed.iter().any(Option::is_none) {
            columns = Some(row.len());
            continue;
        }
        match columns {
            None => columns = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(perr(lineno, format!("expected {c} fields, found {}", row.len())));
            }
            Some(_) => {}
        }
        if row.len() > 2 {
            return Err(perr(lineno, format!("expected 1 or 2 fields, found {}", row.len())));
        }
        let mut nums = Vec::with_capacity(row.len());
        for (f, p) in row.iter().zip(&parsed) {
            match p {
                Some(v) if v.is_finite() => nums.push(*v),
                _ => return Err(perr(lineno, format!("'{f}' is not a finite number"))),
            }
        }
        if nums.len() == 2 {
            if let Some(t) = last_time {
                if !(nums[0] > t) {
                    return Err(perr(lineno, format!("time {} does not increase (previous {t})", nums[0])));
                }
            }
            last_time = Some(nums[0]);
        }
        values.push(*nums.last().expect("row is non-empty"));
    }
    if values.len() < 2 {
        return Err(pathway::Error::Domain(format!("{source}: need at least 2 data rows, got {}", values.len())).into());
    }
    Ok(TimeSeries::new(values)?)
}

/// Parses a matrix given one row per line (comma or whitespace delimited).
pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>, CliError> {
    parse_matrix_named(text, "matrix")
}

fn parse_matrix_named(text: &str, source: &str) -> Result<DMatrix<f64>, CliError> {
    let perr = |line: usize, msg: String| CliError::Parse { origin: source.to_string(), line, msg };
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let row: Vec<&str> = fields(line).collect();
        if row.is_empty() {
            continue;
        }
        let mut nums = Vec::with_capacity(row.len());
        for f in row {
            match f.parse::<f64>() {
                Ok(v) if v.is_finite() => nums.push(v),
                _ => return Err(perr(idx + 1, format!("'{f}' is not a finite number"))),
            }
        }
        if let Some(first) = rows.first() {
            if first.len() != nums.len() {
                return Err(perr(idx + 1, format!("expected {} entries, found {}", first.len(), nums.len())));
            }
        }
        rows.push(nums);
    }
    if rows.is_empty() {
        return Err(pathway::Error::Domain(format!("{source}: empty matrix")).into());
    }
    let (r, c) = (rows.len(), rows[0].len());
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let io = |e: std::io::Error| CliError::Io { path: path.display().to_string(), msg: e.to_string() };
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn read_series(path: &Path) -> Result<TimeSeries, CliError> {
    parse_series_named(&read_text(path)?, &path.display().to_string())
}

fn read_matrix(path: &Path) -> Result<DMatrix<f64>, CliError> {
    parse_matrix_named(&read_text(path)?, &path.display().to_string())
}

fn parse_list(s: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|f| {
            f.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("{flag}: '{}' is not a number", f.trim())))
        })
        .collect::<Result<_, _>>()?;
    if v.is_empty() {
        return Err(CliError::Usage(format!("{flag}: empty list")));
    }
    Ok(v)
}

fn parse_vector(s: &str, flag: &str) -> Result<DVector<f64>, CliError> {
    Ok(DVector::from_vec(parse_list(s, flag)?))
}

fn parse_inline_matrix(s: &str, flag: &str) -> Result<DMatrix<f64>, CliError> {
    let rows: Vec<Vec<f64>> = s.split(';').map(|r| parse_list(r, flag)).collect::<Result<_, _>>()?;
    let c = rows[0].len();
    if rows.iter().any(|r| r.len() != c) {
        return Err(CliError::Usage(format!("{flag}: rows have different lengths")));
    }
    Ok(DMatrix::from_fn(rows.len(), c, |i, j| rows[i][j]))
}

fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts = parse_list(s, "--grid")?;
    let [lo, hi, count] = parts[..] else {
        return Err(CliError::Usage("--grid expects lo,hi,count".into()));
    };
    if count < 2.0 || count.fract() != 0.0 || !(hi > lo) {
        return Err(CliError::Usage("--grid needs lo < hi and an integer count >= 2".into()));
    }
    let n = count as usize;
    Ok((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect())
}

/// Writes rows as CSV. `{}` formatting of f64 is the shortest string that
/// parses back to the same value, so files round-trip exactly.
fn write_csv(path: &Path, header: Option<&Vec<String>>, rows: &[Vec<f64>]) -> Result<(), CliError> {
    let mut s = String::new();
    if let Some(h) = header {
        s.push_str(&h.join(","));
        s.push('\n');
    }
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            write!(s, "{v}").expect("writing to a String");
        }
        s.push('\n');
    }
    std::fs::write(path, s).map_err(|e| CliError::Io { path: path.display().to_string(), msg: e.to_string() })
}
