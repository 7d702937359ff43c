//! Phase-error measurement on the arc domains, equioscillation counting,
//! Zolotarev numbers, the a-priori error bounds and contour data.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::approximants::{modulus_for_theta, Family, UnimodularRational};
use crate::elliptic::DegreeReduction;
use crate::error::{domain, Error, Result};

/// Golden-section stopping width in `theta`.
const REFINE_TOL: f64 = 1e-12;

/// Extrema within this relative distance of the largest one count as
/// attaining the maximum.
const NEAR_MAX_REL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Sqrt,
    Sign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    /// Best approximation of `sqrt z` on `S_theta` (degree `n`).
    Z5,
    /// Best approximation of `sign z` on `T_theta` (degree `m`).
    Z6,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub theta: f64,
    pub error: f64,
}

/// Equioscillation summary for one arc.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcSummary {
    pub lo: f64,
    pub hi: f64,
    /// Alternating extrema attaining the maximum (after merging
    /// neighbours of equal sign).
    pub alternations: usize,
    pub expected: usize,
    pub endpoints_attained: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseErrorReport {
    pub max_error: f64,
    /// `arccos(lambda)` for the degree of the approximant.
    pub predicted: f64,
    pub extrema: Vec<Extremum>,
    pub arcs: Vec<ArcSummary>,
    /// Samples per arc used for the accepted scan.
    pub grid_size: usize,
}

impl PhaseErrorReport {
    /// Every arc has at least the alternation count predicted by theory.
    pub fn equioscillates(&self) -> bool {
        self.arcs.iter().all(|a| a.alternations >= a.expected)
    }
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
fn golden_max<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > REFINE_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    let t = 0.5 * (a + b);
    Ok((t, f(t)?))
}

struct ArcScan {
    extrema: Vec<Extremum>,
    alternations: usize,
    endpoints: bool,
}

fn scan_arc<F: Fn(f64) -> Result<f64>>(f: &F, lo: f64, hi: f64, n: usize) -> Result<ArcScan> {
    let thetas: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect();
    let vals = thetas.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
    let vmax = vals.iter().cloned().fold(f64::MIN, f64::max);
    let vmin = vals.iter().cloned().fold(f64::MAX, f64::min);
    if vmax - vmin <= 1e-14 * (1.0 + vmax.abs().max(vmin.abs())) {
        return Ok(ArcScan {
            extrema: vec![Extremum { theta: lo, error: vals[0] }],
            alternations: 1,
            endpoints: true,
        });
    }

    // (theta, signed error, is_endpoint)
    let mut cands: Vec<(f64, f64, bool)> = Vec::new();
    cands.push((lo, vals[0], true));
    for i in 1..n - 1 {
        let (a, b, c) = (vals[i - 1], vals[i], vals[i + 1]);
        let sigma = if b >= a && b > c {
            1.0
        } else if b <= a && b < c {
            -1.0
        } else {
            continue;
        };
        let g = |t: f64| f(t).map(|v| sigma * v);
        let (t, v) = golden_max(&g, thetas[i - 1], thetas[i + 1])?;
        let (t, v) = if v >= sigma * b { (t, sigma * v) } else { (thetas[i], b) };
        cands.push((t, v, false));
    }
    cands.push((hi, vals[n - 1], true));

    let amp = cands.iter().map(|c| c.1.abs()).fold(0.0, f64::max);
    let kept: Vec<_> = cands
        .into_iter()
        .filter(|c| c.1.abs() >= amp * (1.0 - NEAR_MAX_REL))
        .collect();
    let endpoints = kept.first().is_some_and(|c| c.2 && c.0 == lo)
        && kept.last().is_some_and(|c| c.2 && c.0 == hi);

    let mut merged: Vec<Extremum> = Vec::new();
    for (t, v, _) in kept {
        match merged.last_mut() {
            Some(last) if last.error.signum() == v.signum() => {
                if v.abs() > last.error.abs() {
                    *last = Extremum { theta: t, error: v };
                }
            }
            _ => merged.push(Extremum { theta: t, error: v }),
        }
    }
    Ok(ArcScan {
        alternations: merged.len(),
        extrema: merged,
        endpoints,
    })
}

fn wrapped_arg(w: Complex64) -> f64 {
    // principal value in (-pi, pi]
    let a = w.arg();
    if a == -PI {
        PI
    } else {
        a
    }
}

fn phase_error<E: Fn(Complex64) -> Result<Complex64>>(eval: &E, target: Target, theta: f64, flip: bool) -> Result<f64> {
    let z = Complex64::from_polar(1.0, theta);
    let v = eval(z)?;
    let w = match target {
        Target::Sqrt => v * Complex64::from_polar(1.0, -0.5 * theta),
        Target::Sign if flip => -v,
        Target::Sign => v,
    };
    Ok(wrapped_arg(w))
}

fn run_scans<E: Fn(Complex64) -> Result<Complex64>>(
    eval: &E,
    target: Target,
    arcs: &[(f64, f64, bool)],
    expected: usize,
    grid_n: usize,
    predicted: f64,
) -> Result<PhaseErrorReport> {
    let attempt = |n: usize| -> Result<PhaseErrorReport> {
        let mut extrema = Vec::new();
        let mut summaries = Vec::new();
        let mut max_error: f64 = 0.0;
        for &(lo, hi, flip) in arcs {
            let f = |t: f64| phase_error(eval, target, t, flip);
            let scan = scan_arc(&f, lo, hi, n)?;
            for e in &scan.extrema {
                max_error = max_error.max(e.error.abs());
            }
            summaries.push(ArcSummary {
                lo,
                hi,
                alternations: scan.alternations,
                expected,
                endpoints_attained: scan.endpoints,
            });
            extrema.extend(scan.extrema);
        }
        Ok(PhaseErrorReport {
            max_error,
            predicted,
            extrema,
            arcs: summaries,
            grid_size: n,
        })
    };
    let first = attempt(grid_n)?;
    if first.equioscillates() {
        return Ok(first);
    }
    let second = attempt(2 * grid_n)?;
    let counts = |r: &PhaseErrorReport| r.arcs.iter().map(|a| a.alternations).collect::<Vec<_>>();
    if counts(&first) != counts(&second) {
        let found = first.arcs.iter().map(|a| a.alternations).min().unwrap_or(0);
        let refined = second.arcs.iter().map(|a| a.alternations).min().unwrap_or(0);
        return Err(Error::InsufficientResolution {
            expected,
            found,
            grid: grid_n,
            refined,
            refined_grid: 2 * grid_n,
        });
    }
    Ok(second)
}

fn predicted_error(theta: f64, m: usize) -> Result<f64> {
    let modulus = modulus_for_theta(theta)?;
    Ok(DegreeReduction::new(&modulus, m)?.arccos_lambda())
}

/// Phase error of an approximant to `sqrt z` on `S_theta`, with
/// `2n + 2` alternations expected for degree `n`.
pub fn phase_error_sqrt(r: &UnimodularRational, theta: f64, grid_n: usize) -> Result<PhaseErrorReport> {
    let n = r.degree();
    if grid_n < 8 * (n + 1) {
        return Err(domain("grid", grid_n as f64, "grid must have at least 8(n+1) points"));
    }
    let predicted = predicted_error(theta, 2 * n + 1)?;
    run_scans(
        &|z| r.eval(z),
        Target::Sqrt,
        &[(-2.0 * theta, 2.0 * theta, false)],
        2 * n + 2,
        grid_n,
        predicted,
    )
}

/// Phase error of an approximant to `sign z` on both arcs of `T_theta`,
/// with `m + 1` alternations expected per arc for degree `m`.
pub fn phase_error_sign(s: &UnimodularRational, theta: f64, grid_n: usize) -> Result<PhaseErrorReport> {
    phase_error_sign_with(|z| s.eval(z), s.degree(), theta, grid_n)
}

/// [`phase_error_sign`] for any map of the circle given by its evaluator,
/// such as a composition; `m` is its degree.
pub fn phase_error_sign_with<E: Fn(Complex64) -> Result<Complex64>>(
    eval: E,
    m: usize,
    theta: f64,
    grid_n: usize,
) -> Result<PhaseErrorReport> {
    if grid_n < 8 * (m + 1) {
        return Err(domain("grid", grid_n as f64, "grid must have at least 8(m+1) points"));
    }
    let predicted = predicted_error(theta, m)?;
    run_scans(
        &eval,
        Target::Sign,
        &[(-theta, theta, false), (PI - theta, PI + theta, true)],
        m + 1,
        grid_n,
        predicted,
    )
}

/// The Zolotarev number `Z_m` for the symmetric interval pair attached to
/// `l = cos theta`, from the nome product with `q = rho^{-4m}`.
///
/// `Z_0 = 1`: a constant has equal modulus on both sets.
pub fn zolotarev_number(m: usize, theta: f64) -> Result<f64> {
    let modulus = modulus_for_theta(theta)?;
    if m == 0 {
        return Ok(1.0);
    }
    let log_q = -4.0 * m as f64 * modulus.log_rho();
    let q = log_q.exp();
    let mut prod = 1.0;
    for j in 1..=64 {
        let t = ((1.0 + q.powi(2 * j)) / (1.0 + q.powi(2 * j - 1))).powi(4);
        prod *= t;
        if (t - 1.0).abs() < 1e-17 {
            break;
        }
    }
    Ok(4.0 * (0.5 * log_q).exp() * prod)
}

/// `lambda = ((1 - sqrt Z)/(1 + sqrt Z))^2`.
pub fn lambda_from_z(z: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&z) {
        return Err(domain("Z", z, "Zolotarev number must lie in [0, 1)"));
    }
    let s = z.sqrt();
    Ok(((1.0 - s) / (1.0 + s)).powi(2))
}

/// `arccos(lambda_from_z(z))` without the cancellation of `arccos` near 1.
pub fn phase_error_from_z(z: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&z) {
        return Err(domain("Z", z, "Zolotarev number must lie in [0, 1)"));
    }
    let s = z.sqrt();
    Ok(2.0 * ((2.0 * s).sqrt() / (1.0 + s)).asin())
}

/// The uniform deviation `2 sqrt(Z)/(1 + Z)` of the real sign problem.
pub fn deviation_from_z(z: f64) -> f64 {
    2.0 * z.sqrt() / (1.0 + z)
}

/// The two a-priori bounds `(rho form, secant form)` on the optimal phase
/// error; `degree` is `m` for [`Problem::Z6`] and `n` for [`Problem::Z5`].
pub fn error_bounds(degree: usize, theta: f64, problem: Problem) -> Result<(f64, f64)> {
    let modulus = modulus_for_theta(theta)?;
    let log_sec = (4.0 / theta.cos()).ln();
    let d = degree as f64;
    Ok(match problem {
        Problem::Z6 => (
            4.0 * (-0.5 * d * modulus.log_rho()).exp(),
            4.0 * (-PI * PI * d / (4.0 * log_sec)).exp(),
        ),
        Problem::Z5 => (
            4.0 * (-(d + 0.5) * modulus.log_rho()).exp(),
            4.0 * (-PI * PI * (d + 0.5) / (2.0 * log_sec)).exp(),
        ),
    })
}

/// Both sides of `arccos(((1 - sqrt x)/(1 + sqrt x))^2) <= 2 sqrt 2 x^{1/4}`.
pub fn lemma_bound(x: f64) -> Result<(f64, f64)> {
    if !(x >= 0.0) {
        return Err(domain("x", x, "lemma holds for x >= 0"));
    }
    let s = x.sqrt();
    let lam = ((1.0 - s) / (1.0 + s)).powi(2);
    Ok((lam.min(1.0).acos(), 2.0 * SQRT_2 * x.powf(0.25)))
}

/// Rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Window {
    pub fn new(re: (f64, f64), im: (f64, f64)) -> Result<Self> {
        if !(re.0 < re.1 && im.0 < im.1 && re.0.is_finite() && re.1.is_finite() && im.0.is_finite() && im.1.is_finite()) {
            return Err(domain("window", re.0, "window bounds must be finite and increasing"));
        }
        Ok(Self { re, im })
    }
}

/// Error magnitudes on a rectangular grid, row-major with the imaginary
/// part as the slow index. Poles are `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub resolution: usize,
    pub values: Vec<f64>,
}

impl GridField {
    pub fn re_at(&self, i: usize) -> f64 {
        let (a, b) = self.re_range;
        a + (b - a) * i as f64 / (self.resolution - 1) as f64
    }

    pub fn im_at(&self, j: usize) -> f64 {
        let (a, b) = self.im_range;
        a + (b - a) * j as f64 / (self.resolution - 1) as f64
    }

    /// Value at column `i` (real part) and row `j` (imaginary part).
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.resolution + i]
    }

    /// Grid spacings `(d re, d im)`.
    pub fn spacing(&self) -> (f64, f64) {
        let d = (self.resolution - 1) as f64;
        ((self.re_range.1 - self.re_range.0) / d, (self.im_range.1 - self.im_range.0) / d)
    }

    /// Grid indices of cells flagged as poles.
    pub fn pole_cells(&self) -> Vec<(usize, usize)> {
        let n = self.resolution;
        (0..n * n)
            .filter(|&k| self.values[k].is_infinite())
            .map(|k| (k % n, k / n))
            .collect()
    }

    /// Interior grid points whose value is no larger than any of their eight
    /// neighbours and below `threshold`.
    pub fn local_minima(&self, threshold: f64) -> Vec<(usize, usize)> {
        let n = self.resolution;
        let mut out = Vec::new();
        for j in 1..n - 1 {
            for i in 1..n - 1 {
                let v = self.at(i, j);
                if !(v < threshold) {
                    continue;
                }
                let mut is_min = true;
                for dj in [-1i64, 0, 1] {
                    for di in [-1i64, 0, 1] {
                        if (di, dj) != (0, 0) && self.at((i as i64 + di) as usize, (j as i64 + dj) as usize) < v {
                            is_min = false;
                        }
                    }
                }
                if is_min {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

fn target_value(target: Target, z: Complex64) -> Complex64 {
    match target {
        Target::Sqrt => z.sqrt(),
        Target::Sign => Complex64::new(if z.re < 0.0 { -1.0 } else { 1.0 }, 0.0),
    }
}

/// `|R(z) - target(z)|` on a `resolution x resolution` grid over `window`.
///
/// A grid point is marked `+inf` when a pole of `R` falls inside its cell
/// (the rectangle of half a spacing around it) or evaluation fails.
pub fn contour_grid(r: &UnimodularRational, target: Target, window: Window, resolution: usize) -> Result<GridField> {
    if !(16..=4096).contains(&resolution) {
        return Err(domain("resolution", resolution as f64, "resolution must lie in [16, 4096]"));
    }
    let mut field = GridField {
        re_range: window.re,
        im_range: window.im,
        resolution,
        values: Vec::with_capacity(resolution * resolution),
    };
    let (hr, hi) = field.spacing();
    let poles = r.poles();
    for j in 0..resolution {
        let y = field.im_at(j);
        for i in 0..resolution {
            let x = field.re_at(i);
            let in_cell = poles
                .iter()
                .any(|p| (p.re - x).abs() <= 0.5 * hr && (p.im - y).abs() <= 0.5 * hi);
            let z = Complex64::new(x, y);
            let v = if in_cell {
                f64::INFINITY
            } else {
                match r.eval(z) {
                    Ok(w) => {
                        let e = (w - target_value(target, z)).norm();
                        if e.is_finite() {
                            e
                        } else {
                            f64::INFINITY
                        }
                    }
                    Err(_) => f64::INFINITY,
                }
            };
            field.values.push(v);
        }
    }
    Ok(field)
}

/// Target implied by a family: `sqrt` for `r_n`, `sign` otherwise.
pub fn default_target(r: &UnimodularRational) -> Target {
    match r.family() {
        Family::R => Target::Sqrt,
        _ => Target::Sign,
    }
}

/// Deviation scan of Zolotarev's real sign approximant on `[l, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Z4Report {
    pub max_deviation: f64,
    pub predicted: f64,
    /// Points of maximal deviation, alternating in sign.
    pub extrema: Vec<Extremum>,
}

/// Measure `max |(2/(1+lambda)) F_m(x) - 1|` on `[l, 1]` and count its
/// alternation points (`m + 1` expected).
pub fn z4_report(m: usize, ell: f64, grid_n: usize) -> Result<Z4Report> {
    let sol = crate::approximants::z4_solution(m, ell)?;
    let f = |x: f64| sol.eval(x).map(|v| v - 1.0);
    let scan = scan_arc(&f, ell, 1.0, grid_n.max(8 * (m + 1)))?;
    let max_deviation = scan.extrema.iter().map(|e| e.error.abs()).fold(0.0, f64::max);
    Ok(Z4Report {
        max_deviation,
        predicted: sol.deviation(),
        extrema: scan.extrema,
    })
}
