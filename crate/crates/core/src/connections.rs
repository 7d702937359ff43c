//! Links to neighbouring objects: the Ng-Tsang finite Blaschke products
//! `h_m`, and the Padé approximants `p_n` of `sqrt z` at `z = 1`, which are the
//! `theta -> 0` limits of `r_n`.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::analysis::zolotarev_number;
use crate::approximants::{build_r, build_s, FactorParam, Family, UnimodularRational, ZolotarevFraction};
use crate::elliptic::EllipticModulus;
use crate::error::{domain, Error, Result};

/// `h_m(z; l) = prod (z - c_j)/(1 - c_j z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    pub m: usize,
    pub ell: f64,
    pub params: Vec<f64>,
}

impl BlaschkeProduct {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.to_rational().eval(z)
    }

    pub fn to_rational(&self) -> UnimodularRational {
        let factors = self.params.iter().map(|&c| FactorParam::Finite(c)).collect();
        UnimodularRational::new(0, 0, factors, Family::H)
    }
}

/// Ng and Tsang's Blaschke product, with
/// `c_j = sqrt(l) cn(u_j, l)/dn(u_j, l)` at `u_j = (2j-1)/m K(l)`.
pub fn blaschke_h(m: usize, ell: f64) -> Result<BlaschkeProduct> {
    if m == 0 {
        return Err(domain("m", 0.0, "degree must be at least 1"));
    }
    let modulus = EllipticModulus::new(ell)?;
    let root = ell.sqrt();
    let params: Vec<f64> = (1..=m)
        .map(|j| {
            let (_, cn, dn) = modulus.jacobi().sncndn_at_fraction((2 * j - 1) as f64 / m as f64);
            root * cn / dn
        })
        .collect();
    debug_assert!(params.iter().all(|c| c.abs() < 1.0));
    Ok(BlaschkeProduct { m, ell, params })
}

/// `t = (1 - sqrt l)/(1 + sqrt l)`; the Möbius map `x -> t (1-x)/(1+x)`
/// sends the set pair of `h_m` onto `[-1, -kappa]` and `[kappa, 1]`.
fn mobius_scale(ell: f64) -> f64 {
    let r = ell.sqrt();
    (1.0 - r) / (1.0 + r)
}

/// `kappa = ((1 - sqrt l)/(1 + sqrt l))^2`.
pub fn kappa(ell: f64) -> f64 {
    mobius_scale(ell).powi(2)
}

/// Outer modulus `l~` of the composition law for `h_m`: the Zolotarev
/// number of `[-sqrt l, sqrt l]` against `|x| >= 1/sqrt l`, which equals
/// that of the symmetric pair at modulus `kappa`.
pub fn blaschke_outer_modulus(m: usize, ell: f64) -> Result<f64> {
    if !(ell > 0.0 && ell < 1.0) {
        return Err(domain("ell", ell, "modulus must lie in (0, 1)"));
    }
    zolotarev_number(m, kappa(ell).acos())
}

/// The same `l~` from `lambda = F_m(kappa; kappa)` through
/// `Z = ((1 - sqrt lambda)/(1 + sqrt lambda))^2`.
pub fn blaschke_outer_modulus_via_f(m: usize, ell: f64) -> Result<f64> {
    let k = kappa(ell);
    let lam = ZolotarevFraction::from_ell(m, k)?.eval_direct(k)?.0;
    let r = lam.sqrt();
    Ok(((1.0 - r) / (1.0 + r)).powi(2))
}

/// `(h_mt(h_m(z; l); l~), h_{mt m}(z; l))`.
pub fn compose_h(m_tilde: usize, m: usize, ell: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    let inner = blaschke_h(m, ell)?;
    let outer = blaschke_h(m_tilde, blaschke_outer_modulus(m, ell)?)?;
    let direct = blaschke_h(m_tilde * m, ell)?;
    Ok((outer.eval(inner.eval(z)?)?, direct.eval(z)?))
}

fn h_side(m: usize, ell: f64, z: f64) -> Result<(f64, f64)> {
    let lt = blaschke_outer_modulus(m, ell)?;
    let h = blaschke_h(m, ell)?.eval(Complex64::new(z, 0.0))?;
    let lhs = (1.0 - lt) / (1.0 + lt) * ((h - 1.0) / (h + 1.0));
    if !lhs.re.is_finite() {
        return Err(Error::Pole { index: 0 });
    }
    let k = kappa(ell);
    let f_kk = ZolotarevFraction::from_ell(m, k)?.eval_direct(k)?.0;
    Ok((lhs.re, f_kk))
}

/// `x = t (z - 1)/(z + 1)` for real `z`, required to lie in `[-1, 1]`.
fn mobius_point(ell: f64, z: f64) -> Result<f64> {
    let x = mobius_scale(ell) * (z - 1.0) / (z + 1.0);
    if !(x.abs() <= 1.0) {
        return Err(Error::Branch(format!(
            "z = {z} maps to x = {x} outside [-1, 1]; no unit-circle w exists"
        )));
    }
    Ok(x)
}

/// Both sides of the relation between `h_m` and `s_m` at real `z`:
/// `((1 - l~)/(1 + l~)) (h - 1)/(h + 1)` against
/// `(s_m(w; phi) + 1/s_m(w; phi))/(1 + F_m(kappa; kappa))`, where
/// `(w + 1/w)/2 = t (z - 1)/(z + 1)` and `cos phi = kappa`.
///
/// `w` is the root with nonnegative imaginary part.
pub fn blaschke_s_relation(m: usize, ell: f64, z: f64) -> Result<(f64, f64)> {
    let x = mobius_point(ell, z)?;
    let (lhs, f_kk) = h_side(m, ell, z)?;
    let w = Complex64::new(x, (1.0 - x * x).max(0.0).sqrt());
    let phi = kappa(ell).acos();
    let s = build_s(m, phi)?.eval(w)?;
    let rhs = (s + 1.0 / s).re / (1.0 + f_kk);
    Ok((lhs, rhs))
}

/// Both sides of `((1 - l~)/(1 + l~)) (h - 1)/(h + 1) = 2 F_m(x; kappa)/(1 + F_m(kappa; kappa))`
/// at real `z`, with `x = t (z - 1)/(z + 1)`.
pub fn blaschke_f_relation(m: usize, ell: f64, z: f64) -> Result<(f64, f64)> {
    let x = mobius_point(ell, z)?;
    let (lhs, f_kk) = h_side(m, ell, z)?;
    let f = ZolotarevFraction::from_ell(m, kappa(ell))?.eval_direct(x)?.0;
    Ok((lhs, 2.0 * f / (1.0 + f_kk)))
}

/// The type-`(n, n)` Padé approximant of `sqrt z` at `z = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeApproximant {
    pub n: usize,
    /// Ascending coefficients, normalized so that the denominator starts at 1.
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
    /// Real poles in increasing order.
    pub poles: Vec<f64>,
}

impl PadeApproximant {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.numerator, z) / horner(&self.denominator, z)
    }
}

fn horner(c: &[f64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

/// Simultaneous polynomial root finder (Aberth-Ehrlich) on ascending coefficients.
fn aberth(c: &[f64]) -> Result<Vec<Complex64>> {
    let deg = c.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = c[deg];
    let radius = 1.0 + c[..deg].iter().map(|a| (a / lead).abs()).fold(0.0, f64::max);
    let deriv: Vec<f64> = (1..=deg).map(|k| k as f64 * c[k]).collect();
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(0.5 * radius, 2.0 * PI * (k as f64 + 0.25) / deg as f64))
        .collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..deg {
            let ratio = horner(c, z[i]) / horner(&deriv, z[i]);
            let repulse: Complex64 = (0..deg).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulse);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-14 {
            return Ok(z);
        }
    }
    Err(Error::Convergence {
        what: "Aberth root iteration",
        residual: f64::NAN,
    })
}

/// `p_n(z) = sqrt z ((1+sqrt z)^N + (1-sqrt z)^N)/((1+sqrt z)^N - (1-sqrt z)^N)`
/// with `N = 2n + 1`, expanded exactly as
/// `sum C(N, 2i) z^i / sum C(N, 2i+1) z^i`.
pub fn pade_p(n: usize) -> Result<PadeApproximant> {
    let big_n = 2 * n + 1;
    let num_big: Vec<BigUint> = (0..=n).map(|i| binomial(big_n, 2 * i)).collect();
    let den_big: Vec<BigUint> = (0..=n).map(|i| binomial(big_n, 2 * i + 1)).collect();
    let scale = den_big[0].to_f64().unwrap_or(f64::INFINITY);
    let to_f = |v: &BigUint| v.to_f64().unwrap_or(f64::INFINITY) / scale;
    let numerator: Vec<f64> = num_big.iter().map(to_f).collect();
    let denominator: Vec<f64> = den_big.iter().map(to_f).collect();
    let mut poles = Vec::with_capacity(n);
    for root in aberth(&denominator)? {
        if root.im.abs() > 1e-8 * root.norm().max(1.0) {
            return Err(Error::Convergence {
                what: "Padé denominator has a non-real root",
                residual: root.im,
            });
        }
        // Newton polish on the real axis
        let mut x = root.re;
        for _ in 0..4 {
            let p = horner(&denominator, Complex64::new(x, 0.0)).re;
            let dp: f64 = (1..denominator.len())
                .map(|k| k as f64 * denominator[k] * x.powi(k as i32 - 1))
                .sum();
            if dp == 0.0 {
                break;
            }
            x -= p / dp;
        }
        poles.push(x);
    }
    poles.sort_by(f64::total_cmp);
    Ok(PadeApproximant {
        n,
        numerator,
        denominator,
        poles,
    })
}

/// `-tan^2(j pi/(2n+1))`, `j = 1..n`, in increasing order.
pub fn pade_pole_formula(n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (1..=n)
        .map(|j| -(j as f64 * PI / (2 * n + 1) as f64).tan().powi(2))
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Largest gap between the sorted poles `-a_j` of `r_n(.; theta)` and
/// those of `p_n`, for each `theta` of a decreasing sequence.
pub fn pade_limit_check(n: usize, theta_seq: &[f64]) -> Result<Vec<f64>> {
    if theta_seq.windows(2).any(|w| !(w[1] < w[0])) || theta_seq.iter().any(|&t| !(t > 0.0)) {
        return Err(domain("theta", f64::NAN, "angles must be positive and strictly decreasing"));
    }
    let target = pade_p(n)?.poles;
    theta_seq
        .iter()
        .map(|&theta| {
            let mut poles: Vec<f64> = build_r(n, theta)?
                .factors()
                .iter()
                .map(|p| -p.finite().unwrap_or(f64::INFINITY))
                .collect();
            poles.sort_by(f64::total_cmp);
            Ok(poles.iter().zip(&target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        })
        .collect()
}

/// Largest `|r_n(z; theta) - p_n(z)|` over 16 fixed points of the unit circle.
pub fn pade_value_deviation(n: usize, theta: f64) -> Result<f64> {
    let r = build_r(n, theta)?;
    let p = pade_p(n)?;
    (0..16).try_fold(0.0_f64, |acc, k| {
        let z = Complex64::from_polar(1.0, PI * (2 * k + 1) as f64 / 16.0 - PI);
        Ok(acc.max((r.eval(z)? - p.eval(z)).norm()))
    })
}
