//! Composition laws of the optimal approximants.
//!
//! The sign approximants compose as `s_a(s_b(z; theta); theta~) = s_ab(z; theta)`
//! where `theta~` is the optimal error of `s_b`. The same mechanism gives the
//! rules for the odd-index reciprocal variant, for the square-root
//! approximants, and for Zolotarev's real fractions with `l~ = lambda`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::approximants::{build_r, build_s, modulus_for_theta, UnimodularRational, ZolotarevFraction};
use crate::elliptic::{DegreeReduction, EllipticModulus};
use crate::error::{domain, Error, Result};

/// Seed of the pseudo-random circle samples.
pub const SAMPLE_SEED: u64 = 0x5EED;

/// Number of pseudo-random circle samples added to the Chebyshev ones.
pub const RANDOM_SAMPLES: usize = 64;

/// Largest allowed gap between the two computations of `theta~`.
const THETA_TILDE_TOL: f64 = 1e-11;

/// Degrees and angles of one composition `s_outer(s_inner(z; theta); theta~)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionPlan {
    pub inner_degree: usize,
    pub outer_degree: usize,
    pub theta: f64,
    pub theta_tilde: f64,
    pub target_degree: usize,
}

impl CompositionPlan {
    pub fn new(outer_degree: usize, inner_degree: usize, theta: f64) -> Result<Self> {
        if inner_degree == 0 {
            return Err(domain("m", 0.0, "inner degree must be at least 1"));
        }
        let theta_tilde = theta_tilde(inner_degree, theta)?;
        Ok(Self {
            inner_degree,
            outer_degree,
            theta,
            theta_tilde,
            target_degree: outer_degree * inner_degree,
        })
    }
}

/// Optimal phase error of `s_m` on `T_theta`, the half-width of the image arcs.
///
/// Produced by the degree equation, `arccos(lambda)`, and cross-checked
/// against `|arg s_m(e^{i theta})|`.
pub fn theta_tilde(m: usize, theta: f64) -> Result<f64> {
    let modulus = modulus_for_theta(theta)?;
    if m == 0 {
        return Ok(FRAC_PI_2);
    }
    let chain = DegreeReduction::new(&modulus, m)?.arccos_lambda();
    let by_arg = theta_tilde_by_arg(m, theta)?;
    if (chain - by_arg).abs() > THETA_TILDE_TOL {
        return Err(Error::Convergence {
            what: "theta~ from the degree equation and from the arc endpoint disagree",
            residual: (chain - by_arg).abs(),
        });
    }
    Ok(chain)
}

/// `|arg s_m(e^{i theta}; theta)|`.
pub fn theta_tilde_by_arg(m: usize, theta: f64) -> Result<f64> {
    let s = build_s(m, theta)?;
    Ok(s.eval(Complex64::from_polar(1.0, theta))?.arg().abs())
}

fn check_unit(z: Complex64) -> Result<()> {
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(domain("z", z.norm(), "point must lie on the unit circle"));
    }
    Ok(())
}

/// `s~_{2n+1} = s_{2n+1}^{(-1)^n}`.
pub fn build_s_tilde(n: usize, theta: f64) -> Result<UnimodularRational> {
    let s = build_s(2 * n + 1, theta)?;
    Ok(if n % 2 == 1 { s.reciprocal() } else { s })
}

/// `(s_mt(s_m(z; theta); theta~), s_{mt m}(z; theta))`.
pub fn compose_s(m_tilde: usize, m: usize, theta: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    check_unit(z)?;
    let plan = CompositionPlan::new(m_tilde, m, theta)?;
    let inner = build_s(m, theta)?;
    let outer = build_s(m_tilde, plan.theta_tilde)?;
    let direct = build_s(plan.target_degree, theta)?;
    Ok((outer.eval(inner.eval(z)?)?, direct.eval(z)?))
}

/// Both sides of the composition rule for `s~`, with `theta~` the optimal
/// error of `s_{2n+1}`.
pub fn compose_s_tilde(n_tilde: usize, n: usize, theta: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    check_unit(z)?;
    let tt = theta_tilde(2 * n + 1, theta)?;
    let inner = build_s_tilde(n, theta)?;
    let outer = build_s_tilde(n_tilde, tt)?;
    let target = ((2 * n_tilde + 1) * (2 * n + 1) - 1) / 2;
    let direct = build_s_tilde(target, theta)?;
    Ok((outer.eval(inner.eval(z)?)?, direct.eval(z)?))
}

/// Degree of the square-root approximant produced by composing `r_nt` after `r_n`.
pub fn composed_sqrt_degree(n_tilde: usize, n: usize) -> usize {
    2 * n_tilde * n + n_tilde + n
}

/// `(r_n(z) r_nt(z / r_n(z)^2; theta~), r_{2 nt n + nt + n}(z))`.
pub fn compose_r(n_tilde: usize, n: usize, theta: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    let tt = theta_tilde(2 * n + 1, theta)?;
    let inner = build_r(n, theta)?;
    let outer = build_r(n_tilde, tt)?;
    let direct = build_r(composed_sqrt_degree(n_tilde, n), theta)?;
    let rn = inner.eval(z)?;
    let left = rn * outer.eval(z / (rn * rn))?;
    Ok((left, direct.eval(z)?))
}

/// `(F_mt(F_m(x; l); lambda), F_{mt m}(x; l))`, both through the product
/// forms, with `lambda` the reduced modulus of `F_m`.
pub fn compose_f(m_tilde: usize, m: usize, modulus: &EllipticModulus, x: f64) -> Result<(f64, f64)> {
    if !(x.abs() <= 1.0) {
        return Err(domain("x", x, "F_m is evaluated on [-1, 1]"));
    }
    let inner = ZolotarevFraction::new(m, modulus)?;
    let red = DegreeReduction::new(modulus, m)?;
    let tilde = EllipticModulus::from_pair(red.lambda(), red.lambda_comp())?;
    let outer = ZolotarevFraction::new(m_tilde, &tilde)?;
    let direct = ZolotarevFraction::new(m_tilde * m, modulus)?;
    let (y, _) = inner.eval_product(x)?;
    Ok((outer.eval_product(y.clamp(-1.0, 1.0))?.0, direct.eval_product(x)?.0))
}

/// Deterministic circle samples: `n` Chebyshev-spaced angles
/// `pi cos((2k+1) pi / 2n)` followed by [`RANDOM_SAMPLES`] seeded uniform ones.
pub fn circle_samples(n: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    (0..n)
        .map(|k| PI * ((2 * k + 1) as f64 * PI / (2 * n) as f64).cos())
        .chain((0..RANDOM_SAMPLES).map(|_| rng.gen_range(-PI..PI)))
        .map(|t| Complex64::from_polar(1.0, t))
        .collect()
}

/// Largest `|left - right|` of a two-sided identity over the samples.
pub fn max_residual<F>(samples: &[Complex64], sides: F) -> Result<f64>
where
    F: Fn(Complex64) -> Result<(Complex64, Complex64)>,
{
    samples.iter().try_fold(0.0_f64, |acc, &z| {
        let (l, r) = sides(z)?;
        Ok(acc.max((l - r).norm()))
    })
}

/// Largest `|left - right|` of the real composition over `n` points of `[-1, 1]`.
pub fn max_residual_f(m_tilde: usize, m: usize, modulus: &EllipticModulus, n: usize) -> Result<f64> {
    (0..n).try_fold(0.0_f64, |acc, i| {
        let x = -1.0 + 2.0 * i as f64 / (n - 1).max(1) as f64;
        let (l, r) = compose_f(m_tilde, m, modulus, x)?;
        Ok(acc.max((l - r).abs()))
    })
}
