//! The `zolotarev` command line.
//!
//! Exit codes: 0 success, 1 I/O or self-test failure, 2 usage, 3 numerical
//! domain, 4 equioscillation deficiency, 5 composition residual breach.

use std::ffi::OsString;
use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    contour_grid, phase_error_sign, phase_error_sqrt, z4_report, Extremum, PhaseErrorReport, Target, Window,
};
use crate::approximants::{build_r, build_s, z4_solution, FactorParam, Family, UnimodularRational};
use crate::composition::{
    circle_samples, compose_f, compose_r, compose_s, composed_sqrt_degree, max_residual, theta_tilde,
};
use crate::elliptic::{solve_lambda, EllipticModulus};
use crate::error::Error;
use crate::oracle::precise::{sign_bound_check, sqrt_bound_check, BoundCheck};
use crate::report::{format_real, to_json, write_csv, write_grid_csv, Point, Real, ReportEnvelope};
use crate::selftest;

/// Smallest distance of `theta` from `0` and `pi/2`.
pub const THETA_MARGIN: f64 = 1e-8;

/// Largest composition residual accepted by `compose`.
pub const COMPOSE_TOL: f64 = 1e-9;

/// Largest degree accepted by `bounds`.
pub const MAX_BOUNDS_DEGREE: usize = 64;

/// Smallest scan grid accepted by `error`.
pub const MIN_GRID: usize = 64;

/// Relative tolerance of the fitted decay rate in `bounds`.
pub const SLOPE_TOL: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(name = "zolotarev", version, about = "Best unimodular rational approximants on circular arcs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct an approximant and describe it.
    Build(BuildArgs),
    /// Measure the phase error and its equioscillation.
    Error(ErrorArgs),
    /// Tabulate measured errors against the a-priori bounds.
    Bounds(BoundsArgs),
    /// Compare a composition with the direct high-degree construction.
    Compose(ComposeArgs),
    /// Write the error modulus on a grid of the complex plane as CSV.
    Contour(ContourArgs),
    /// Run the acceptance sweep.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemArg {
    /// Zolotarev's real sign problem on `[-1, -l] U [l, 1]`.
    Z4,
    /// `sqrt z` on the arc of half-width `2 theta` around 1.
    Z5,
    /// `sign z` on the two arcs of half-width `theta` around +-1.
    Z6,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Angle {
    /// Arc half-width theta, in (1e-8, pi/2 - 1e-8).
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Modulus l = cos(theta).
    #[arg(long, allow_negative_numbers = true)]
    pub ell: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    #[arg(long)]
    pub degree: usize,
    #[command(flatten)]
    pub angle: Angle,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct ErrorArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    #[arg(long)]
    pub degree: usize,
    #[command(flatten)]
    pub angle: Angle,
    /// Samples per arc; at least 64 and 8 per alternation.
    #[arg(long)]
    pub grid: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    /// Rows run from degree 0 to this one (at most 64).
    #[arg(long)]
    pub max_degree: usize,
    #[command(flatten)]
    pub angle: Angle,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct ComposeArgs {
    #[arg(long, value_enum, default_value = "z6")]
    pub problem: ProblemArg,
    /// Inner degree.
    #[arg(long)]
    pub m: usize,
    /// Outer degree.
    #[arg(long)]
    pub m_tilde: usize,
    #[command(flatten)]
    pub angle: Angle,
    /// Chebyshev-spaced sample points, before the seeded random ones.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct ContourArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    #[arg(long)]
    pub degree: usize,
    #[command(flatten)]
    pub angle: Angle,
    /// `re_min,re_max,im_min,im_max`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-1.5, 1.5, -1.5, 1.5])]
    pub window: Vec<f64>,
    /// Grid points per axis.
    #[arg(long, default_value_t = 401)]
    pub resolution: usize,
    #[command(flatten)]
    pub output: Output,
}

/// A failed command with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Equioscillation(String),
    Residual(String),
    Io(String),
    Selftest(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Selftest(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Equioscillation(_) => 4,
            CliError::Residual(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Domain(m)
            | CliError::Equioscillation(m)
            | CliError::Residual(m)
            | CliError::Io(m)
            | CliError::Selftest(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InsufficientResolution { .. } => CliError::Equioscillation(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

impl Angle {
    /// `theta` must lie in `(1e-8, pi/2 - 1e-8)`; `ell` is converted first.
    fn resolve(&self) -> CliResult<(f64, f64)> {
        let theta = match (self.theta, self.ell) {
            (Some(t), _) => t,
            (None, Some(l)) => {
                if !(l > 0.0 && l < 1.0) {
                    return Err(CliError::Usage(format!("--ell must lie in (0, 1), got {l}")));
                }
                l.acos()
            }
            (None, None) => return Err(CliError::Usage("one of --theta or --ell is required".into())),
        };
        if !(theta > THETA_MARGIN && theta < FRAC_PI_2 - THETA_MARGIN) {
            return Err(CliError::Usage(format!(
                "--theta must lie in (1e-8, pi/2 - 1e-8), got {theta}"
            )));
        }
        Ok((theta, self.ell.unwrap_or_else(|| theta.cos())))
    }
}

impl Output {
    fn format_or(&self, default: Format, allowed: &[Format]) -> CliResult<Format> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(CliError::Usage(format!("--format {f:?} is not available for this command").to_lowercase()))
        }
    }

    fn emit(&self, bytes: &[u8]) -> CliResult<()> {
        match &self.out {
            Some(path) => write_file(path, bytes),
            None => std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::Io(format!("standard output: {e}"))),
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct CommonInputs {
    problem: ProblemArg,
    degree: usize,
    theta: Real,
    ell: Real,
}

#[derive(Serialize)]
struct CircleBuild {
    family: &'static str,
    lambda: Real,
    predicted_error: Real,
    z_power: i32,
    quarter_turns: u8,
    inverted: bool,
    factor_params: Vec<Real>,
    zeros: Vec<Point>,
    poles: Vec<Point>,
    exact_type: [usize; 2],
}

#[derive(Serialize)]
struct RealBuild {
    lambda: Real,
    predicted_error: Real,
    /// The approximant is `scale * F_m(x)`.
    scale: Real,
    zeros: Vec<Point>,
    poles: Vec<Point>,
    exact_type: [usize; 2],
}

fn points(zs: Vec<Complex64>) -> Vec<Point> {
    zs.into_iter().map(Point::from).collect()
}

fn factor_reals(r: &UnimodularRational) -> Vec<Real> {
    r.factors()
        .iter()
        .map(|p| match p {
            FactorParam::Finite(v) => Real(*v),
            FactorParam::Infinite => Real(f64::INFINITY),
        })
        .collect()
}

/// The approximant of a circle problem; `z4` has none.
fn circle_approximant(problem: ProblemArg, degree: usize, theta: f64) -> CliResult<UnimodularRational> {
    Ok(match problem {
        ProblemArg::Z5 => build_r(degree, theta)?,
        ProblemArg::Z6 => build_s(degree, theta)?,
        ProblemArg::Z4 => return Err(CliError::Usage("z4 has no circle approximant; use z5 or z6".into())),
    })
}

/// Degree of the sign approximant whose `lambda` governs the problem.
fn sign_degree(problem: ProblemArg, degree: usize) -> usize {
    match problem {
        ProblemArg::Z5 => 2 * degree + 1,
        _ => degree,
    }
}

fn cmd_build(a: &BuildArgs) -> CliResult<Vec<u8>> {
    a.output.format_or(Format::Json, &[Format::Json])?;
    let (theta, ell) = a.angle.resolve()?;
    let inputs = CommonInputs {
        problem: a.problem,
        degree: a.degree,
        theta: Real(theta),
        ell: Real(ell),
    };
    let text = if a.problem == ProblemArg::Z4 {
        let sol = z4_solution(a.degree, ell)?;
        let f = sol.fraction();
        let lam = f.lambda();
        let (zeros, poles) = (f.zeros(), f.poles());
        let results = RealBuild {
            lambda: Real(lam),
            predicted_error: Real(sol.deviation()),
            scale: Real(2.0 / (1.0 + lam)),
            exact_type: [zeros.len(), poles.len()],
            zeros: points(zeros),
            poles: points(poles),
        };
        to_json(&ReportEnvelope::new("build", inputs, results))
    } else {
        let r = circle_approximant(a.problem, a.degree, theta)?;
        let red = solve_lambda(ell, sign_degree(a.problem, a.degree))?;
        let (p, q) = r.exact_type();
        let results = CircleBuild {
            family: match r.family() {
                Family::R => "r",
                Family::S => "s",
                Family::H => "h",
            },
            lambda: Real(red.lambda()),
            predicted_error: Real(red.arccos_lambda()),
            z_power: r.z_power(),
            quarter_turns: r.quarter_turns(),
            inverted: r.is_inverted(),
            factor_params: factor_reals(&r),
            zeros: points(r.zeros()),
            poles: points(r.poles()),
            exact_type: [p, q],
        };
        to_json(&ReportEnvelope::new("build", inputs, results))
    };
    Ok(text.into_bytes())
}

#[derive(Serialize)]
struct ErrorInputs {
    problem: ProblemArg,
    degree: usize,
    theta: Real,
    ell: Real,
    grid: usize,
}

#[derive(Serialize)]
struct ExtremumOut {
    theta: Real,
    error: Real,
}

#[derive(Serialize)]
struct ArcOut {
    lo: Real,
    hi: Real,
    alternations: usize,
    expected: usize,
    endpoints_attained: bool,
}

#[derive(Serialize)]
struct ErrorResults {
    measured: Real,
    predicted: Real,
    difference: Real,
    equioscillates: bool,
    grid_size: usize,
    arcs: Vec<ArcOut>,
    extrema: Vec<ExtremumOut>,
}

fn extrema_out(ex: &[Extremum]) -> Vec<ExtremumOut> {
    ex.iter()
        .map(|e| ExtremumOut {
            theta: Real(e.theta),
            error: Real(e.error),
        })
        .collect()
}

fn error_results(rep: &PhaseErrorReport) -> ErrorResults {
    ErrorResults {
        measured: Real(rep.max_error),
        predicted: Real(rep.predicted),
        difference: Real(rep.max_error - rep.predicted),
        equioscillates: rep.equioscillates(),
        grid_size: rep.grid_size,
        arcs: rep
            .arcs
            .iter()
            .map(|a| ArcOut {
                lo: Real(a.lo),
                hi: Real(a.hi),
                alternations: a.alternations,
                expected: a.expected,
                endpoints_attained: a.endpoints_attained,
            })
            .collect(),
        extrema: extrema_out(&rep.extrema),
    }
}

/// Report text and whether the alternation count meets theory.
fn cmd_error(a: &ErrorArgs) -> CliResult<(Vec<u8>, bool)> {
    a.output.format_or(Format::Json, &[Format::Json])?;
    let (theta, ell) = a.angle.resolve()?;
    let per_arc = match a.problem {
        ProblemArg::Z5 => 2 * a.degree + 2,
        _ => a.degree + 1,
    };
    let grid = a.grid.unwrap_or((64 * per_arc).max(MIN_GRID));
    if grid < MIN_GRID.max(8 * per_arc) {
        return Err(CliError::Usage(format!(
            "--grid must be at least {} for this degree, got {grid}",
            MIN_GRID.max(8 * per_arc)
        )));
    }
    let inputs = ErrorInputs {
        problem: a.problem,
        degree: a.degree,
        theta: Real(theta),
        ell: Real(ell),
        grid,
    };
    let (results, ok) = match a.problem {
        ProblemArg::Z4 => {
            let rep = z4_report(a.degree, ell, grid)?;
            let n = rep.extrema.len();
            let results = ErrorResults {
                measured: Real(rep.max_deviation),
                predicted: Real(rep.predicted),
                difference: Real(rep.max_deviation - rep.predicted),
                equioscillates: n > a.degree,
                grid_size: grid,
                arcs: vec![ArcOut {
                    lo: Real(ell),
                    hi: Real(1.0),
                    alternations: n,
                    expected: a.degree + 1,
                    endpoints_attained: rep.extrema.first().is_some_and(|e| e.theta == ell)
                        && rep.extrema.last().is_some_and(|e| e.theta == 1.0),
                }],
                extrema: extrema_out(&rep.extrema),
            };
            let ok = results.equioscillates;
            (results, ok)
        }
        _ => {
            let r = circle_approximant(a.problem, a.degree, theta)?;
            let rep = if a.problem == ProblemArg::Z5 {
                phase_error_sqrt(&r, theta, grid)?
            } else {
                phase_error_sign(&r, theta, grid)?
            };
            (error_results(&rep), rep.equioscillates())
        }
    };
    Ok((to_json(&ReportEnvelope::new("error", inputs, results)).into_bytes(), ok))
}

#[derive(Serialize)]
struct BoundsInputs {
    problem: ProblemArg,
    max_degree: usize,
    theta: Real,
    ell: Real,
}

#[derive(Serialize)]
struct BoundRow {
    degree: usize,
    measured: Real,
    bound_rho: Real,
    bound_secant: Real,
    ln_measured: Real,
    ln_bound_rho: Real,
    ln_bound_secant: Real,
    holds: bool,
    precision_bits: usize,
}

#[derive(Serialize)]
struct BoundsResults {
    log_rho: Real,
    /// Least-squares slope of `ln measured` against the degree.
    fitted_slope: Option<Real>,
    expected_slope: Real,
    slope_within_tolerance: Option<bool>,
    all_hold: bool,
    rows: Vec<BoundRow>,
}

/// Least-squares slope of `ys` against `xs`; `None` below two points.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Some(sxy / sxx)
}

fn cmd_bounds(a: &BoundsArgs) -> CliResult<Vec<u8>> {
    let format = a.output.format_or(Format::Json, &[Format::Json, Format::Csv])?;
    let (theta, ell) = a.angle.resolve()?;
    if a.max_degree > MAX_BOUNDS_DEGREE {
        return Err(CliError::Usage(format!("--max-degree must be at most 64, got {}", a.max_degree)));
    }
    let check: fn(usize, f64, &[f64]) -> crate::Result<BoundCheck> = match a.problem {
        ProblemArg::Z5 => sqrt_bound_check,
        ProblemArg::Z6 => sign_bound_check,
        ProblemArg::Z4 => return Err(CliError::Usage("bounds are tabulated for z5 and z6".into())),
    };
    // the checks are independent; collect keeps the degree order
    let checks = (0..=a.max_degree)
        .into_par_iter()
        .map(|d| check(d, theta, &[]))
        .collect::<crate::Result<Vec<_>>>()?;
    let log_rho = EllipticModulus::from_angle(theta)?.log_rho();
    // degree 0 of the sign problem sits off the geometric decay
    let first = if a.problem == ProblemArg::Z6 { 1 } else { 0 };
    let (xs, ys): (Vec<f64>, Vec<f64>) = checks
        .iter()
        .enumerate()
        .skip(first)
        .map(|(d, c)| (d as f64, c.ln_measured))
        .unzip();
    let expected = match a.problem {
        ProblemArg::Z5 => -log_rho,
        _ => -0.5 * log_rho,
    };
    let slope = fit_slope(&xs, &ys);
    let rows: Vec<BoundRow> = checks
        .iter()
        .enumerate()
        .map(|(d, c)| BoundRow {
            degree: d,
            measured: Real(c.measured),
            bound_rho: Real(c.bound_rho),
            bound_secant: Real(c.bound_secant),
            ln_measured: Real(c.ln_measured),
            ln_bound_rho: Real(c.ln_bound_rho),
            ln_bound_secant: Real(c.ln_bound_secant),
            holds: c.holds(),
            precision_bits: c.precision,
        })
        .collect();
    if format == Format::Csv {
        let mut buf = Vec::new();
        let cells = rows.iter().map(|r| {
            vec![
                r.degree.to_string(),
                format_real(r.measured.0),
                format_real(r.bound_rho.0),
                format_real(r.bound_secant.0),
            ]
        });
        write_csv(&mut buf, &["degree", "measured", "bound_rho", "bound_secant"], cells)
            .map_err(|e| CliError::Io(e.to_string()))?;
        return Ok(buf);
    }
    let results = BoundsResults {
        log_rho: Real(log_rho),
        fitted_slope: slope.map(Real),
        expected_slope: Real(expected),
        slope_within_tolerance: slope.map(|s| (s / expected - 1.0).abs() <= SLOPE_TOL),
        all_hold: rows.iter().all(|r| r.holds),
        rows,
    };
    let inputs = BoundsInputs {
        problem: a.problem,
        max_degree: a.max_degree,
        theta: Real(theta),
        ell: Real(ell),
    };
    Ok(to_json(&ReportEnvelope::new("bounds", inputs, results)).into_bytes())
}

#[derive(Serialize)]
struct ComposeInputs {
    problem: ProblemArg,
    m: usize,
    m_tilde: usize,
    theta: Real,
    ell: Real,
    samples: usize,
}

#[derive(Serialize)]
struct ComposeResults {
    target_degree: usize,
    theta_tilde: Option<Real>,
    points: usize,
    max_residual: Real,
    tolerance: Real,
    passed: bool,
}

/// Report text and whether the residual is within tolerance.
fn cmd_compose(a: &ComposeArgs) -> CliResult<(Vec<u8>, bool)> {
    a.output.format_or(Format::Json, &[Format::Json])?;
    let (theta, ell) = a.angle.resolve()?;
    if a.samples < 2 {
        return Err(CliError::Usage(format!("--samples must be at least 2, got {}", a.samples)));
    }
    let circle = circle_samples(a.samples);
    let (target_degree, tt, points, residual) = match a.problem {
        ProblemArg::Z6 => {
            let res = max_residual(&circle, |z| compose_s(a.m_tilde, a.m, theta, z))?;
            (a.m_tilde * a.m, Some(theta_tilde(a.m, theta)?), circle.len(), res)
        }
        ProblemArg::Z5 => {
            let res = max_residual(&circle, |z| compose_r(a.m_tilde, a.m, theta, z))?;
            let tt = theta_tilde(2 * a.m + 1, theta)?;
            (composed_sqrt_degree(a.m_tilde, a.m), Some(tt), circle.len(), res)
        }
        ProblemArg::Z4 => {
            let modulus = EllipticModulus::new(ell)?;
            let n = a.samples;
            let mut res: f64 = 0.0;
            for i in 0..n {
                let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
                let (l, r) = compose_f(a.m_tilde, a.m, &modulus, x)?;
                res = res.max((l - r).abs());
            }
            (a.m_tilde * a.m, None, n, res)
        }
    };
    let passed = residual <= COMPOSE_TOL;
    let results = ComposeResults {
        target_degree,
        theta_tilde: tt.map(Real),
        points,
        max_residual: Real(residual),
        tolerance: Real(COMPOSE_TOL),
        passed,
    };
    let inputs = ComposeInputs {
        problem: a.problem,
        m: a.m,
        m_tilde: a.m_tilde,
        theta: Real(theta),
        ell: Real(ell),
        samples: a.samples,
    };
    Ok((to_json(&ReportEnvelope::new("compose", inputs, results)).into_bytes(), passed))
}

fn cmd_contour(a: &ContourArgs) -> CliResult<Vec<u8>> {
    a.output.format_or(Format::Csv, &[Format::Csv])?;
    let (theta, _) = a.angle.resolve()?;
    let w = &a.window;
    if w.len() != 4 {
        return Err(CliError::Usage(format!("--window takes 4 comma-separated values, got {}", w.len())));
    }
    let window = Window::new((w[0], w[1]), (w[2], w[3])).map_err(|e| CliError::Usage(e.to_string()))?;
    if !(16..=4096).contains(&a.resolution) {
        return Err(CliError::Usage(format!("--resolution must lie in [16, 4096], got {}", a.resolution)));
    }
    let r = circle_approximant(a.problem, a.degree, theta)?;
    let target = if a.problem == ProblemArg::Z5 { Target::Sqrt } else { Target::Sign };
    let field = contour_grid(&r, target, window, a.resolution)?;
    let mut buf = Vec::new();
    write_grid_csv(&mut buf, &field).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(buf)
}

fn cmd_selftest() -> CliResult<()> {
    let mut failed = Vec::new();
    for outcome in selftest::run_all() {
        println!("{outcome}");
        if !outcome.passed {
            failed.push(outcome.id.to_string());
        }
    }
    if failed.is_empty() {
        println!("selftest: all criteria passed");
        Ok(())
    } else {
        Err(CliError::Selftest(format!("selftest: failed criteria {}", failed.join(", "))))
    }
}

/// Execute a parsed command.
pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Build(a) => a.output.emit(&cmd_build(a)?),
        Command::Error(a) => {
            let (text, ok) = cmd_error(a)?;
            a.output.emit(&text)?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Equioscillation("alternation count below theory".into()))
            }
        }
        Command::Bounds(a) => a.output.emit(&cmd_bounds(a)?),
        Command::Compose(a) => {
            let (text, ok) = cmd_compose(a)?;
            a.output.emit(&text)?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Residual(format!("composition residual above {COMPOSE_TOL:e}")))
            }
        }
        Command::Contour(a) => a.output.emit(&cmd_contour(a)?),
        Command::Selftest => cmd_selftest(),
    }
}

/// Parse `args`, run, print any error to standard error, and return the
/// exit code.
pub fn main_with<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
