//! The optimal unimodular approximants `r_n` (to `sqrt z`) and `s_m` (to
//! `sign z`) on arcs of the unit circle, Zolotarev's real fractions
//! `F_m`, `G_m`, and the circle lift joining the two.
//!
//! Approximants are stored in factored form only. Each factor is unimodular
//! on the circle, so the product stays unimodular to rounding regardless of
//! the degree.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::elliptic::{DegreeReduction, EllipticModulus, MODULUS_FLOOR};
use crate::error::{domain, Error, Result};

/// Denominators smaller than this are reported as poles.
const POLE_THRESHOLD: f64 = 1e-300;

/// Tolerance for "on the unit circle" checks.
const CIRCLE_TOL: f64 = 1e-12;

/// Validate an arc half-width and return the modulus pair `(cos t, sin t)`.
pub fn modulus_for_theta(theta: f64) -> Result<EllipticModulus> {
    if !(MODULUS_FLOOR..=FRAC_PI_2 - MODULUS_FLOOR).contains(&theta) {
        return Err(domain(
            "theta",
            theta,
            "arc half-width must lie in [1e-8, pi/2 - 1e-8]",
        ));
    }
    EllipticModulus::from_angle(theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    /// One arc around 1: `{e^{it} : |t| <= 2 theta}`.
    S,
    /// Two arcs around `1` and `-1`, each of half-width `theta`.
    T,
}

/// The arc sets on which the approximation problems are posed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcDomain {
    pub kind: ArcKind,
    pub theta: f64,
}

impl ArcDomain {
    pub fn new(kind: ArcKind, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(domain("theta", theta, "arc half-width must lie in (0, pi/2)"));
        }
        Ok(Self { kind, theta })
    }

    /// Angle intervals `[lo, hi]` covered by the domain.
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        match self.kind {
            ArcKind::S => vec![(-2.0 * self.theta, 2.0 * self.theta)],
            ArcKind::T => vec![(-self.theta, self.theta), (PI - self.theta, PI + self.theta)],
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if (z.norm() - 1.0).abs() > CIRCLE_TOL {
            return false;
        }
        let t = z.arg();
        match self.kind {
            ArcKind::S => t.abs() <= 2.0 * self.theta,
            ArcKind::T => t.abs() <= self.theta || (-z).arg().abs() <= self.theta,
        }
    }
}

/// A real factor parameter, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FactorParam {
    Finite(f64),
    Infinite,
}

impl FactorParam {
    pub fn finite(self) -> Option<f64> {
        match self {
            FactorParam::Finite(v) => Some(v),
            FactorParam::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, FactorParam::Infinite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `(1 + a z)/(z + a)`; an infinite parameter gives `z`.
    R,
    /// `(z - i b)/(1 + i b z)`; an infinite parameter gives `-1/z`.
    S,
    /// `(z - c)/(1 - c z)`; an infinite parameter gives `1/z`.
    H,
}

/// `i^q z^k prod_j f(z; p_j)^{+-1}` with all factors from one family.
///
/// `inverted` records that every factor appears with exponent `-1`, which
/// makes [`UnimodularRational::reciprocal`] a structural involution.
#[derive(Debug, Clone, PartialEq)]
pub struct UnimodularRational {
    z_power: i32,
    quarter_turns: u8,
    factors: Vec<FactorParam>,
    family: Family,
    inverted: bool,
}

/// `(numerator, denominator)` of a single factor.
fn factor_parts(family: Family, p: FactorParam, z: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    match (family, p) {
        (Family::R, FactorParam::Finite(a)) => (one + a * z, z + a),
        (Family::R, FactorParam::Infinite) => (z, one),
        (Family::S, FactorParam::Finite(b)) => (z - i * b, one + i * b * z),
        (Family::S, FactorParam::Infinite) => (-one, z),
        (Family::H, FactorParam::Finite(c)) => (z - c, one - c * z),
        (Family::H, FactorParam::Infinite) => (one, z),
    }
}

fn i_power(q: u8) -> Complex64 {
    match q % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl UnimodularRational {
    pub fn new(z_power: i32, quarter_turns: i32, factors: Vec<FactorParam>, family: Family) -> Self {
        Self {
            z_power,
            quarter_turns: quarter_turns.rem_euclid(4) as u8,
            factors,
            family,
            inverted: false,
        }
    }

    /// The constant `i^q`.
    pub fn constant(quarter_turns: i32, family: Family) -> Self {
        Self::new(0, quarter_turns, Vec::new(), family)
    }

    pub fn z_power(&self) -> i32 {
        self.z_power
    }

    pub fn quarter_turns(&self) -> u8 {
        self.quarter_turns
    }

    pub fn factors(&self) -> &[FactorParam] {
        &self.factors
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn is_inverted(&self) -> bool {
        self.inverted
    }

    /// Number of stored factors.
    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    /// The factored form of `1/R`.
    pub fn reciprocal(&self) -> Self {
        Self {
            z_power: -self.z_power,
            quarter_turns: (4 - self.quarter_turns) % 4,
            factors: self.factors.clone(),
            family: self.family,
            inverted: !self.inverted,
        }
    }

    /// Evaluate the product in stored order.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = i_power(self.quarter_turns);
        if self.z_power != 0 {
            if z.norm() < POLE_THRESHOLD && self.z_power < 0 {
                return Err(Error::Pole { index: 0 });
            }
            acc *= z.powi(self.z_power);
        }
        for (idx, &p) in self.factors.iter().enumerate() {
            let (mut num, mut den) = factor_parts(self.family, p, z);
            if self.inverted {
                std::mem::swap(&mut num, &mut den);
            }
            if den.norm() < POLE_THRESHOLD {
                return Err(Error::Pole { index: idx + 1 });
            }
            acc *= num / den;
        }
        Ok(acc)
    }

    /// Whether factor `p` is a unimodular constant (its zero and pole cancel).
    fn degenerate(&self, p: FactorParam) -> bool {
        match (self.family, p) {
            (Family::R, FactorParam::Finite(a)) => a == 1.0,
            (Family::S, FactorParam::Finite(b)) => b.abs() == 1.0,
            (Family::H, FactorParam::Finite(c)) => c.abs() == 1.0,
            _ => false,
        }
    }

    /// Net order at the origin (positive: zero, negative: pole) together
    /// with the finite nonzero zeros and poles of the non-degenerate factors.
    fn divisor(&self) -> (i32, Vec<Complex64>, Vec<Complex64>) {
        let i = Complex64::i();
        let mut order = 0_i32;
        let mut zeros = Vec::new();
        let mut poles = Vec::new();
        for &p in &self.factors {
            if self.degenerate(p) {
                continue;
            }
            let (z0, p0, ord) = match (self.family, p) {
                (Family::R, FactorParam::Finite(0.0)) => (None, None, -1),
                (Family::R, FactorParam::Finite(a)) => {
                    (Some(Complex64::new(-1.0 / a, 0.0)), Some(Complex64::new(-a, 0.0)), 0)
                }
                (Family::R, FactorParam::Infinite) => (None, None, 1),
                (Family::S, FactorParam::Finite(0.0)) => (None, None, 1),
                (Family::S, FactorParam::Finite(b)) => (Some(i * b), Some(i / b), 0),
                (Family::S, FactorParam::Infinite) => (None, None, -1),
                (Family::H, FactorParam::Finite(0.0)) => (None, None, 1),
                (Family::H, FactorParam::Finite(c)) => {
                    (Some(Complex64::new(c, 0.0)), Some(Complex64::new(1.0 / c, 0.0)), 0)
                }
                (Family::H, FactorParam::Infinite) => (None, None, -1),
            };
            let (z0, p0, ord) = if self.inverted { (p0, z0, -ord) } else { (z0, p0, ord) };
            order += ord;
            zeros.extend(z0);
            poles.extend(p0);
        }
        order += self.z_power;
        (order, zeros, poles)
    }

    /// Zeros in the finite plane, with the origin repeated by multiplicity.
    pub fn zeros(&self) -> Vec<Complex64> {
        let (order, mut zeros, _) = self.divisor();
        zeros.extend((0..order.max(0)).map(|_| Complex64::new(0.0, 0.0)));
        zeros
    }

    /// Poles in the finite plane, with the origin repeated by multiplicity.
    pub fn poles(&self) -> Vec<Complex64> {
        let (order, _, mut poles) = self.divisor();
        poles.extend((0..(-order).max(0)).map(|_| Complex64::new(0.0, 0.0)));
        poles
    }

    /// Degrees `(numerator, denominator)` after cancelling common factors.
    pub fn exact_type(&self) -> (usize, usize) {
        let (order, zeros, _) = self.divisor();
        let paired = zeros.len();
        (paired + order.max(0) as usize, paired + (-order).max(0) as usize)
    }
}

/// `(l sn + dn) / cn` at `frac * K(l')` with modulus `l'`, where `l = cos t`.
/// Returns `None` when `cn` vanishes.
fn node_base(modulus: &EllipticModulus, frac: f64) -> Option<f64> {
    let (sn, cn, dn) = modulus.jacobi_comp().sncndn_at_fraction(frac);
    if cn == 0.0 {
        None
    } else {
        Some((modulus.ell() * sn + dn) / cn)
    }
}

fn a_from_modulus(modulus: &EllipticModulus, j: usize, n: usize) -> f64 {
    let base = node_base(modulus, (2 * j - 1) as f64 / (2 * n + 1) as f64)
        .expect("nodes of r_n stay strictly inside the quarter period");
    let sq = base * base;
    if (j + n).is_multiple_of(2) {
        sq
    } else {
        1.0 / sq
    }
}

fn b_from_modulus(modulus: &EllipticModulus, j: usize, m: usize) -> FactorParam {
    let odd_j = j % 2 == 1;
    match node_base(modulus, (2 * j - 1) as f64 / m as f64) {
        // the base is infinite: exponent +1 gives infinity, -1 gives zero
        None if odd_j => FactorParam::Finite(0.0),
        None => FactorParam::Infinite,
        Some(base) => {
            let v = if odd_j { 1.0 / base } else { base };
            let sign = if (m * j) % 2 == 1 { -1.0 } else { 1.0 };
            FactorParam::Finite(sign * v)
        }
    }
}

/// Coefficient `a_j` of the optimal `sqrt z` approximant `r_n`.
pub fn coeff_a(j: usize, n: usize, theta: f64) -> Result<f64> {
    if !(1..=n).contains(&j) {
        return Err(domain("j", j as f64, "index must lie in 1..=n"));
    }
    Ok(a_from_modulus(&modulus_for_theta(theta)?, j, n))
}

/// The optimal approximant `r_n(z; theta)` to `sqrt z` on `S_theta`.
pub fn build_r(n: usize, theta: f64) -> Result<UnimodularRational> {
    let modulus = modulus_for_theta(theta)?;
    let factors = (1..=n)
        .map(|j| FactorParam::Finite(a_from_modulus(&modulus, j, n)))
        .collect();
    Ok(UnimodularRational::new(0, 0, factors, Family::R))
}

/// Coefficient `b_j` of the optimal `sign z` approximant `s_m`, sign included.
pub fn coeff_b(j: usize, m: usize, theta: f64) -> Result<FactorParam> {
    if !(1..=m).contains(&j) {
        return Err(domain("j", j as f64, "index must lie in 1..=m"));
    }
    Ok(b_from_modulus(&modulus_for_theta(theta)?, j, m))
}

/// The optimal approximant `s_m(z; theta)` to `sign z` on `T_theta`.
pub fn build_s(m: usize, theta: f64) -> Result<UnimodularRational> {
    let modulus = modulus_for_theta(theta)?;
    let factors: Vec<_> = (1..=m).map(|j| b_from_modulus(&modulus, j, m)).collect();
    debug_assert!(factors.iter().enumerate().all(|(i, p)| match p {
        FactorParam::Finite(b) if *b != 0.0 => {
            let j = i + 1;
            let base_sign = if 2 * j - 1 > m { -1.0 } else { 1.0 };
            let want = if (m * j) % 2 == 1 { -base_sign } else { base_sign };
            b.signum() == want
        }
        _ => true,
    }));
    Ok(UnimodularRational::new(0, 1 - m as i32, factors, Family::S))
}

/// Free-function form of [`UnimodularRational::reciprocal`].
pub fn reciprocal(r: &UnimodularRational) -> UnimodularRational {
    r.reciprocal()
}

/// Zolotarev's real rational `F_m(x; l)` and its companion `G_m(x; l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZolotarevFraction {
    m: usize,
    modulus: EllipticModulus,
    reduction: DegreeReduction,
    /// `cn^2/sn^2` at `v_j` with modulus `l'`, `j = 1..2m-1`.
    cs2: Vec<f64>,
    /// `dn^2` at `v_j` with modulus `l'`.
    dn2: Vec<f64>,
}

impl ZolotarevFraction {
    pub fn new(m: usize, modulus: &EllipticModulus) -> Result<Self> {
        let reduction = DegreeReduction::new(modulus, m)?;
        let mut cs2 = Vec::new();
        let mut dn2 = Vec::new();
        for j in 1..(2 * m).max(1) {
            let (sn, cn, dn) = modulus.jacobi_comp().sncndn_at_fraction(j as f64 / m as f64);
            cs2.push((cn / sn).powi(2));
            dn2.push(dn * dn);
        }
        Ok(Self {
            m,
            modulus: modulus.clone(),
            reduction,
            cs2,
            dn2,
        })
    }

    pub fn from_ell(m: usize, ell: f64) -> Result<Self> {
        Self::new(m, &EllipticModulus::new(ell)?)
    }

    /// The fraction attached to the arc half-width `theta` (`l = cos theta`).
    pub fn from_theta(m: usize, theta: f64) -> Result<Self> {
        Self::new(m, &modulus_for_theta(theta)?)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &EllipticModulus {
        &self.modulus
    }

    pub fn reduction(&self) -> &DegreeReduction {
        &self.reduction
    }

    pub fn lambda(&self) -> f64 {
        self.reduction.lambda()
    }

    /// `(F, G)` from the elliptic definition.
    ///
    /// For `|x| <= l` the real inverse `sn^{-1}(x/l, l)` is used. Past `l`
    /// the inverse sits on the line `Re u = K(l)`, where
    /// `sn(K + iv, l) = 1/dn(v, l')`; the shift by `i v` scales to a real
    /// argument for the complementary modulus `lambda'`, so everything stays
    /// real.
    pub fn eval_direct(&self, x: f64) -> Result<(f64, f64)> {
        if !(x.abs() <= 1.0) {
            return Err(domain("x", x, "F_m is evaluated on [-1, 1]"));
        }
        let Some(reduced) = self.reduction.reduced() else {
            return Ok((0.0, 1.0));
        };
        let ell = self.modulus.ell();
        let lam = self.reduction.lambda();
        let ax = x.abs();
        let (f, g) = if ax <= ell {
            let s = ax / ell;
            let cn2 = (ell - ax) * (ell + ax) / (ell * ell);
            let u = self.modulus.jacobi().incomplete_from_sn(s, cn2);
            let (sn, _, dn) = reduced
                .jacobi()
                .sncndn_at_fraction(u / self.modulus.quarter_period());
            (lam * sn, dn)
        } else {
            let lc = self.modulus.ell_comp();
            let s = ((ax - ell) * (ax + ell)).sqrt() / (ax * lc);
            let cn2 = ell * ell * (1.0 - ax) * (1.0 + ax) / (ax * ax * lc * lc);
            let v = self.modulus.jacobi_comp().incomplete_from_sn(s.min(1.0), cn2);
            let frac = self.m as f64 * v / self.modulus.quarter_period_comp();
            let (_, cn, dn) = reduced.jacobi_comp().sncndn_at_fraction(frac);
            (lam / dn, self.reduction.lambda_comp() * cn / dn)
        };
        Ok((f.copysign(x), g))
    }

    /// `(F, G)` from the finite product identities in `s = x / l`.
    ///
    /// For odd `m` the `G` product carries `sqrt(1 - x^2)` and is only real
    /// on `[-1, 1]`; for even `m` both components are rational in `x`.
    pub fn eval_product(&self, x: f64) -> Result<(f64, f64)> {
        if !x.is_finite() {
            return Err(domain("x", x, "argument must be finite"));
        }
        let m = self.m;
        if m == 0 {
            return Ok((0.0, 1.0));
        }
        let odd = m % 2 == 1;
        if odd && x.abs() > 1.0 {
            return Err(domain("x", x, "G_m for odd m is real only on [-1, 1]"));
        }
        let s = x / self.modulus.ell();
        let s2 = s * s;
        let n = m / 2;
        let num_terms = if odd { n } else { n.saturating_sub(1) };
        let mut f = self.lambda() * s / self.reduction.scale();
        let mut g = if odd { ((1.0 - x) * (1.0 + x)).sqrt() } else { 1.0 };
        for k in 1..=n {
            let den = 1.0 + s2 * self.cs2[2 * k - 2];
            if den.abs() < POLE_THRESHOLD {
                return Err(Error::Pole { index: k });
            }
            if k <= num_terms {
                f *= 1.0 + s2 * self.cs2[2 * k - 1];
            }
            f /= den;
            g *= (1.0 - s2 * self.dn2[2 * k - 2]) / den;
        }
        Ok((f, g))
    }
}

impl ZolotarevFraction {
    /// Zeros of `F_m`: the origin and conjugate pairs on the imaginary axis.
    pub fn zeros(&self) -> Vec<Complex64> {
        let n = self.m / 2;
        let terms = if self.m % 2 == 1 { n } else { n.saturating_sub(1) };
        let mut out = if self.m == 0 { Vec::new() } else { vec![Complex64::new(0.0, 0.0)] };
        out.extend((1..=terms).flat_map(|k| self.axis_pair(self.cs2[2 * k - 1])));
        out
    }

    /// Poles of `F_m`, in conjugate pairs on the imaginary axis.
    pub fn poles(&self) -> Vec<Complex64> {
        (1..=self.m / 2).flat_map(|k| self.axis_pair(self.cs2[2 * k - 2])).collect()
    }

    fn axis_pair(&self, c: f64) -> [Complex64; 2] {
        let y = self.modulus.ell() / c.sqrt();
        [Complex64::new(0.0, y), Complex64::new(0.0, -y)]
    }
}

/// Free-function form of [`ZolotarevFraction::eval_direct`].
pub fn eval_f_direct(zf: &ZolotarevFraction, x: f64) -> Result<(f64, f64)> {
    zf.eval_direct(x)
}

/// Free-function form of [`ZolotarevFraction::eval_product`].
pub fn eval_f_product(zf: &ZolotarevFraction, x: f64) -> Result<(f64, f64)> {
    zf.eval_product(x)
}

/// Zolotarev's best approximation `(2/(1+lambda)) F_m` to `sign x` on
/// `[-1, -l] U [l, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Z4Solution {
    fraction: ZolotarevFraction,
}

impl Z4Solution {
    pub fn fraction(&self) -> &ZolotarevFraction {
        &self.fraction
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (f, _) = if x.abs() <= 1.0 {
            self.fraction.eval_direct(x)?
        } else {
            self.fraction.eval_product(x)?
        };
        Ok(2.0 / (1.0 + self.fraction.lambda()) * f)
    }

    /// The optimal uniform deviation `(1 - lambda)/(1 + lambda)`.
    pub fn deviation(&self) -> f64 {
        let lam = self.fraction.lambda();
        (1.0 - lam) / (1.0 + lam)
    }
}

pub fn z4_solution(m: usize, ell: f64) -> Result<Z4Solution> {
    if m == 0 {
        return Err(domain("m", 0.0, "degree must be at least 1"));
    }
    if !(MODULUS_FLOOR..=1.0 - MODULUS_FLOOR).contains(&ell) {
        return Err(domain("ell", ell, "modulus must lie in [1e-8, 1 - 1e-8]"));
    }
    Ok(Z4Solution {
        fraction: ZolotarevFraction::from_ell(m, ell)?,
    })
}

/// `s_m(z)` through the lift `F(x) + i sign(Im z)^m G(x)`, `x = Re z`.
///
/// `sign(0)` is taken as `+1`. For odd `m`, `G` vanishes at `x = +-1`, so the
/// lift is continuous there as well.
pub fn eval_s_via_fg(zf: &ZolotarevFraction, z: Complex64) -> Result<Complex64> {
    if !((z.norm() - 1.0).abs() <= CIRCLE_TOL) {
        return Err(domain("|z|", z.norm(), "point must lie on the unit circle"));
    }
    let x = z.re.clamp(-1.0, 1.0);
    let (f, g) = zf.eval_direct(x)?;
    let sign = if z.im < 0.0 && zf.m() % 2 == 1 { -1.0 } else { 1.0 };
    Ok(Complex64::new(f, sign * g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s1_is_identity() {
        let s = build_s(1, 0.7).unwrap();
        assert_eq!(s.factors(), &[FactorParam::Finite(0.0)]);
        assert_eq!(s.quarter_turns(), 0);
        let z = Complex64::from_polar(1.0, 0.3);
        assert!((s.eval(z).unwrap() - z).norm() < 1e-15);
    }

    #[test]
    fn reciprocal_is_involution() {
        let s = build_s(3, 1.1).unwrap();
        assert_eq!(s.reciprocal().reciprocal(), s);
        let c = UnimodularRational::constant(1, Family::S);
        assert_eq!(c.reciprocal().eval(Complex64::new(0.5, 0.0)).unwrap(), -Complex64::i());
    }

    #[test]
    fn infinite_s_factor_is_minus_inverse() {
        let r = UnimodularRational::new(0, 0, vec![FactorParam::Infinite], Family::S);
        let z = Complex64::from_polar(1.0, 0.4);
        assert!((r.eval(z).unwrap() + 1.0 / z).norm() < 1e-15);
        assert_eq!(r.exact_type(), (0, 1));
    }

    #[test]
    fn pole_reports_factor_index() {
        let r = UnimodularRational::new(0, 0, vec![FactorParam::Finite(2.0)], Family::R);
        assert_eq!(r.eval(Complex64::new(-2.0, 0.0)), Err(Error::Pole { index: 1 }));
    }

    #[test]
    fn fraction_endpoint_values() {
        let zf = ZolotarevFraction::from_ell(3, 0.4).unwrap();
        let (f, g) = zf.eval_direct(0.4).unwrap();
        assert!((f - zf.lambda()).abs() < 1e-14);
        assert!((g - zf.reduction().lambda_comp()).abs() < 1e-12);
        let (f1, g1) = zf.eval_direct(1.0).unwrap();
        assert!((f1 - 1.0).abs() < 1e-14 && g1.abs() < 1e-14);
    }
}
