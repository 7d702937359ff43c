//! Independent reference computations.
//!
//! Nothing in this module calls into [`crate::elliptic`], [`crate::approximants`]
//! or [`crate::analysis`]; every value is obtained from a defining integral, a
//! differential equation, or a brute-force scan.

pub mod precise;

use std::f64::consts::FRAC_PI_2;

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub estimated_error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive Gauss–Kronrod (7, 15) quadrature: the interval with the
/// largest error estimate is bisected until the summed estimate meets `tol`.
pub fn adaptive_quadrature<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<OracleResult> {
    const MAX_INTERVALS: usize = 20_000;
    let (v, e) = gk15(&f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    let mut evals = 15;
    loop {
        let total: f64 = pieces.iter().map(|p| p.2).sum();
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if err <= tol.max(4.0 * f64::EPSILON * total.abs()) {
            return Ok(OracleResult {
                value: total,
                estimated_error: err,
                evaluations: evals,
            });
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::Convergence {
                what: "adaptive quadrature",
                residual: err,
            });
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        evals += 30;
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// `K(k)` by quadrature from the complementary modulus, using
/// `1 - k^2 sin^2 = cos^2 + k'^2 sin^2`.
fn quad_k_comp(kc: f64) -> Result<OracleResult> {
    adaptive_quadrature(
        |t: f64| {
            let (s, c) = t.sin_cos();
            1.0 / (c * c + kc * kc * s * s).sqrt()
        },
        0.0,
        FRAC_PI_2,
        1e-13,
    )
}

/// `K(ell) = int_0^{pi/2} (1 - ell^2 sin^2 t)^{-1/2} dt` by adaptive quadrature.
pub fn oracle_k(ell: f64) -> Result<OracleResult> {
    if !(0.0..=1.0 - 1e-6).contains(&ell) {
        return Err(domain("ell", ell, "quadrature oracle needs 0 <= ell <= 1 - 1e-6"));
    }
    quad_k_comp(((1.0 - ell) * (1.0 + ell)).sqrt())
}

/// Incomplete integral `F(phi, ell)` by adaptive quadrature.
pub fn oracle_incomplete_f(phi: f64, ell: f64) -> Result<OracleResult> {
    if !(0.0..=1.0 - 1e-6).contains(&ell) {
        return Err(domain("ell", ell, "quadrature oracle needs 0 <= ell <= 1 - 1e-6"));
    }
    let r = adaptive_quadrature(
        |t: f64| 1.0 / (1.0 - ell * ell * t.sin().powi(2)).sqrt(),
        0.0,
        phi.abs(),
        1e-13,
    )?;
    Ok(OracleResult {
        value: r.value.copysign(phi),
        ..r
    })
}

/// Grötzsch value from two quadrature evaluations of `K`.
pub fn oracle_mu(ell: f64) -> Result<f64> {
    let kc = ((1.0 - ell) * (1.0 + ell)).sqrt();
    Ok(FRAC_PI_2 * quad_k_comp(ell)?.value / quad_k_comp(kc)?.value)
}

/// Bisection for `mu(ell) = v` using quadrature `K`, to a bracket of width `1e-15`.
pub fn oracle_mu_inverse(v: f64) -> Result<f64> {
    let (mut lo, mut hi) = (1e-6, 1.0 - 1e-6);
    if !(oracle_mu(hi)? <= v && v <= oracle_mu(lo)?) {
        return Err(domain("v", v, "outside the bisection bracket"));
    }
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if oracle_mu(mid)? > v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Result of integrating the amplitude equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeResult {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
    pub amplitude: f64,
    pub steps: usize,
}

/// Integrate `phi' = sqrt(1 - ell^2 sin^2 phi)` from 0 to `u` (Dormand–Prince 5(4)).
pub fn integrate_amplitude(u: f64, ell: f64, tol: f64) -> Result<AmplitudeResult> {
    if !(0.0..1.0).contains(&ell) {
        return Err(domain("ell", ell, "modulus must lie in [0, 1)"));
    }
    let rhs = |phi: f64| (1.0 - ell * ell * phi.sin().powi(2)).sqrt();
    let sign = if u < 0.0 { -1.0 } else { 1.0 };
    let end = u.abs();
    let mut t = 0.0;
    let mut phi = 0.0;
    let mut h = 1e-3_f64.min(end.max(1e-300));
    let mut steps = 0;
    while t < end {
        if steps > 10_000_000 {
            return Err(Error::Convergence {
                what: "amplitude integration",
                residual: end - t,
            });
        }
        if t + h > end {
            h = end - t;
        }
        let k1 = rhs(phi);
        let k2 = rhs(phi + h * (k1 / 5.0));
        let k3 = rhs(phi + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
        let k4 = rhs(phi + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
        let k5 = rhs(
            phi + h
                * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 + 64448.0 / 6561.0 * k3
                    - 212.0 / 729.0 * k4),
        );
        let k6 = rhs(
            phi + h
                * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2
                    + 46732.0 / 5247.0 * k3
                    + 49.0 / 176.0 * k4
                    - 5103.0 / 18656.0 * k5),
        );
        let incr = h
            * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5
                + 11.0 / 84.0 * k6);
        let next = phi + incr;
        let k7 = rhs(next);
        let low = h
            * (5179.0 / 57600.0 * k1 + 7571.0 / 16695.0 * k3 + 393.0 / 640.0 * k4
                - 92097.0 / 339200.0 * k5
                + 187.0 / 2100.0 * k6
                + k7 / 40.0);
        let err = (incr - low).abs();
        steps += 1;
        if err <= tol || h < 1e-14 {
            t += h;
            phi = next;
        }
        let factor = if err == 0.0 {
            4.0
        } else {
            (0.9 * (tol / err).powf(0.2)).clamp(0.2, 4.0)
        };
        h *= factor;
    }
    let phi = sign * phi;
    Ok(AmplitudeResult {
        sn: phi.sin(),
        cn: phi.cos(),
        dn: rhs(phi),
        amplitude: phi,
        steps,
    })
}

/// `sn(u, ell)` from the amplitude equation, for `|u| <= 2 K(ell)`.
pub fn oracle_sn(u: f64, ell: f64) -> Result<OracleResult> {
    let k = oracle_k(ell)?.value;
    if u.abs() > 2.0 * k * (1.0 + 1e-12) {
        return Err(domain("u", u, "amplitude oracle needs |u| <= 2K"));
    }
    let r = integrate_amplitude(u, ell, 1e-15)?;
    Ok(OracleResult {
        value: r.sn,
        estimated_error: 1e-12,
        evaluations: 7 * r.steps,
    })
}

/// Outcome of the one-parameter scan over `r(z) = (1 + a z)/(z + a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaxScan {
    /// Best grid value of `a`.
    pub argmin: f64,
    /// Ratio between neighbouring grid values.
    pub cell_ratio: f64,
    /// Golden-section refinement of the argmin.
    pub refined_argmin: f64,
    /// Max phase error at the refined argmin.
    pub min_error: f64,
    /// Whether the discrete differences change sign exactly once.
    pub unimodal: bool,
}

/// Max over `theta in [-2 Theta, 2 Theta]` of `|arg((1 + a e^{it})/(e^{it} + a)) - t/2|`.
///
/// The error is odd in `t`; its derivative `(a^2-1)/(1+2a cos t+a^2) - 1/2`
/// vanishes at `cos t = (a^2 - 3)/(2a)`, so the maximum is attained at the
/// arc end or at that critical point.
pub fn degree1_phase_error(a: f64, theta: f64) -> f64 {
    let err = |t: f64| {
        let (s, c) = t.sin_cos();
        (a * s).atan2(1.0 + a * c) - s.atan2(a + c) - 0.5 * t
    };
    let end = 2.0 * theta;
    let mut best = err(end).abs();
    let c = (a * a - 3.0) / (2.0 * a);
    if c <= 1.0 && c >= end.cos() {
        best = best.max(err(c.acos()).abs());
    }
    best
}

/// Brute-force search for the best degree-1 approximant to `sqrt(z)` on the arc
/// of half-width `2 theta`, over `a` on a log grid in `[1e-4, 1e4]`.
pub fn oracle_minimax_degree1(theta: f64, search_grid: usize) -> Result<MinimaxScan> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(domain("theta", theta, "angle must lie in (0, pi/2)"));
    }
    if search_grid < 10_000 {
        return Err(domain("search_grid", search_grid as f64, "need at least 1e4 points"));
    }
    let (lo, hi) = (1e-4_f64.ln(), 1e4_f64.ln());
    let step = (hi - lo) / (search_grid - 1) as f64;
    let errors: Vec<f64> = (0..search_grid)
        .map(|i| degree1_phase_error((lo + step * i as f64).exp(), theta))
        .collect();
    let (best, _) = errors
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &e)| if e < acc.1 { (i, e) } else { acc });
    let sign_changes = errors
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| *d != 0.0)
        .collect::<Vec<_>>()
        .windows(2)
        .filter(|p| p[0].signum() != p[1].signum())
        .count();

    // golden section on log(a) over the neighbouring cells
    let g = 0.5 * (5.0_f64.sqrt() - 1.0);
    let f = |x: f64| degree1_phase_error(x.exp(), theta);
    let mut a = lo + step * best.saturating_sub(1) as f64;
    let mut b = lo + step * (best + 1).min(search_grid - 1) as f64;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > 1e-14 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    Ok(MinimaxScan {
        argmin: (lo + step * best as f64).exp(),
        cell_ratio: step.exp(),
        refined_argmin: x.exp(),
        min_error: f(x),
        unimodal: sign_changes == 1,
    })
}
