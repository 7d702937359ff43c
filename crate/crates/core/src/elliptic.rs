//! Real-argument elliptic special functions.
//!
//! Everything here works with a modulus *pair* `(k, k')` rather than a bare
//! `k`. Several callers (the circle approximants in particular) need moduli
//! extremely close to 1, where `k' = sqrt(1 - k^2)` cannot be recovered from
//! a rounded `k`. Carrying both halves keeps the complete integrals and the
//! Jacobi functions accurate in relative terms at both ends of `(0, 1)`.
//!
//! * complete integral `K` through the arithmetic-geometric mean,
//! * `sn`, `cn`, `dn` through the descending Landen recursion seeded by the
//!   same AGM sequence,
//! * `sn^{-1}` through Carlson's symmetric integral `R_F`,
//! * the Grötzsch ring function `mu(k) = (pi/2) K(k') / K(k)` and its inverse,
//! * the degree-reduction modulus `lambda` with `mu(lambda) = mu(ell) / m`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Error, Result};

/// Maximum number of Landen steps kept for `sn`/`cn`/`dn`.
const LANDEN_DEPTH: usize = 24;

/// Lower edge of the modulus range accepted by the higher-level modules.
pub const MODULUS_FLOOR: f64 = 1e-8;

/// Jacobi elliptic functions and integrals for one modulus pair `(k, k')`.
///
/// The AGM sequence `(a_n, b_n)` is computed once on construction; it yields
/// `K(k)` and drives the Gauss-Landen back-substitution for `sn`, `cn`, `dn`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jacobi {
    k: f64,
    kc: f64,
    quarter: f64,
    agm: Vec<(f64, f64)>,
    mean: f64,
}

impl Jacobi {
    /// Build from a modulus pair. `kc` must lie in `(0, 1]`; `k` may round to
    /// exactly 1 as long as `kc` is still positive.
    pub fn from_pair(k: f64, kc: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(domain("k", k, "modulus must lie in [0, 1]"));
        }
        if !(kc > 0.0 && kc <= 1.0) {
            return Err(domain("k'", kc, "complementary modulus must lie in (0, 1]"));
        }
        if (k * k + kc * kc - 1.0).abs() > 1e-13 {
            return Err(domain("k", k, "k^2 + k'^2 must equal 1"));
        }
        let mut a = 1.0_f64;
        let mut b = kc;
        let mut agm = Vec::with_capacity(8);
        let mut converged = false;
        for _ in 0..LANDEN_DEPTH {
            agm.push((a, b));
            if (a - b).abs() <= 4.0 * f64::EPSILON * a {
                converged = true;
                break;
            }
            let a_next = 0.5 * (a + b);
            b = (a * b).sqrt();
            a = a_next;
        }
        if !converged {
            return Err(Error::Convergence {
                what: "arithmetic-geometric mean",
                residual: (a - b).abs(),
            });
        }
        let mean = 0.5 * (a + b);
        Ok(Self {
            k,
            kc,
            quarter: FRAC_PI_2 / mean,
            agm,
            mean,
        })
    }

    /// Build from `k` alone, deriving `k' = sqrt((1-k)(1+k))`.
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(domain("ell", k, "modulus must lie in [0, 1)"));
        }
        Self::from_pair(k, ((1.0 - k) * (1.0 + k)).sqrt())
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn kc(&self) -> f64 {
        self.kc
    }

    /// The quarter period `K(k)`.
    pub fn quarter_period(&self) -> f64 {
        self.quarter
    }

    /// Gauss-Landen back-substitution for `0 <= u <= K/2`.
    ///
    /// The recursion carries `cn/sn` and `dn` as products and quotients of
    /// positive quantities, so both keep full relative accuracy even when
    /// `k'` is tiny.
    fn landen(&self, u: f64) -> (f64, f64, f64) {
        let v = u * self.mean;
        let (sn0, cn0) = v.sin_cos();
        if sn0 == 0.0 {
            return (0.0, 1.0, 1.0);
        }
        let mut ratio = cn0 / sn0;
        let mut c = self.mean * ratio;
        let mut dn = 1.0;
        for &(a, b) in self.agm.iter().rev() {
            ratio *= c;
            c *= dn;
            dn = (b + ratio) / (a + ratio);
            ratio = c / a;
        }
        let sn = 1.0 / (c * c + 1.0).sqrt();
        (sn, c * sn, dn)
    }

    /// `(sn, cn, dn)` at `u = frac * K`.
    ///
    /// The argument is reduced in units of `K`, so nodes such as
    /// `(2j-1)/m * K` land exactly on the quarter period when `2j - 1 = m`.
    /// Past `K/2` the reflection `u -> K - u` is used, which keeps `cn`
    /// accurate in relative terms near its zero.
    pub fn sncndn_at_fraction(&self, frac: f64) -> (f64, f64, f64) {
        if !frac.is_finite() {
            return (f64::NAN, f64::NAN, f64::NAN);
        }
        let half_periods = (0.5 * frac).round();
        let r = frac - 2.0 * half_periods;
        let flip = (half_periods as i64).rem_euclid(2) == 1;
        let a = r.abs();
        let (mut sn, mut cn, dn) = if a <= 0.5 {
            self.landen(a * self.quarter)
        } else {
            let (s, c, d) = self.landen((1.0 - a) * self.quarter);
            (c / d, self.kc * s / d, self.kc / d)
        };
        if r < 0.0 {
            sn = -sn;
        }
        if flip {
            sn = -sn;
            cn = -cn;
        }
        (sn, cn, dn)
    }

    /// `(sn, cn, dn)` at `u`.
    pub fn sncndn(&self, u: f64) -> (f64, f64, f64) {
        self.sncndn_at_fraction(u / self.quarter)
    }

    /// Incomplete integral `F` for an amplitude given by `sin` and `cos^2`.
    ///
    /// Passing `cos^2` separately avoids forming `1 - sin^2` when the caller
    /// can supply it without cancellation.
    pub fn incomplete_from_sn(&self, sn: f64, cn2: f64) -> f64 {
        let cn2 = cn2.max(0.0);
        sn * carlson_rf(cn2, cn2 + self.kc * self.kc * sn * sn, 1.0)
    }

    /// Real inverse of `sn` on `[-K, K]`.
    pub fn inverse_sn(&self, x: f64) -> Result<f64> {
        if !(x.abs() <= 1.0) {
            return Err(domain("x", x, "sn^{-1} requires |x| <= 1"));
        }
        Ok(self.incomplete_from_sn(x, (1.0 - x) * (1.0 + x)))
    }
}

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
///
/// At most one argument may be zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    const TOL: f64 = 1e-3;
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..64 {
        let a = (x + y + z) / 3.0;
        let dx = (a - x) / a;
        let dy = (a - y) / a;
        let dz = (a - z) / a;
        if dx.abs().max(dy.abs()).max(dz.abs()) < TOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0) / a.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
    }
    f64::NAN
}

/// Complete elliptic integral of the first kind, `K(ell)`, by AGM.
pub fn complete_k(ell: f64) -> Result<f64> {
    Ok(Jacobi::new(ell)?.quarter_period())
}

/// `(sn, cn, dn)` at `(u, ell)`.
pub fn jacobi_sncndn(u: f64, ell: f64) -> Result<(f64, f64, f64)> {
    if !u.is_finite() {
        return Err(domain("u", u, "argument must be finite"));
    }
    Ok(Jacobi::new(ell)?.sncndn(u))
}

/// Inverse of `sn(., ell)` with values in `[-K(ell), K(ell)]`.
pub fn inverse_sn(x: f64, ell: f64) -> Result<f64> {
    Jacobi::new(ell)?.inverse_sn(x)
}

/// A modulus `ell` in `(0, 1)` together with its complement and the derived
/// quarter periods, Grötzsch value and growth rate.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticModulus {
    fwd: Jacobi,
    comp: Jacobi,
}

impl EllipticModulus {
    pub fn new(ell: f64) -> Result<Self> {
        if !(ell > 0.0 && ell < 1.0) {
            return Err(domain("ell", ell, "modulus must lie in (0, 1)"));
        }
        Self::from_pair(ell, ((1.0 - ell) * (1.0 + ell)).sqrt())
    }

    /// `ell = cos(theta)`, `ell' = sin(theta)` for `theta` in `(0, pi/2)`.
    pub fn from_angle(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(domain("theta", theta, "angle must lie in (0, pi/2)"));
        }
        let (s, c) = theta.sin_cos();
        Self::from_pair(c, s)
    }

    /// Build from `(ell, ell')`. `ell` may be 1 to working precision when
    /// `ell'` carries the remaining information.
    pub fn from_pair(ell: f64, ell_comp: f64) -> Result<Self> {
        if !(ell > 0.0 && ell <= 1.0 && ell_comp > 0.0 && ell_comp <= 1.0) {
            return Err(domain("ell", ell, "modulus pair must lie in (0, 1)"));
        }
        Ok(Self {
            fwd: Jacobi::from_pair(ell, ell_comp)?,
            comp: Jacobi::from_pair(ell_comp, ell)?,
        })
    }

    /// The modulus with the roles of `ell` and `ell'` exchanged.
    pub fn complement(&self) -> Self {
        Self {
            fwd: self.comp.clone(),
            comp: self.fwd.clone(),
        }
    }

    pub fn ell(&self) -> f64 {
        self.fwd.k
    }

    pub fn ell_comp(&self) -> f64 {
        self.fwd.kc
    }

    /// `K(ell)`.
    pub fn quarter_period(&self) -> f64 {
        self.fwd.quarter
    }

    /// `K(ell')`.
    pub fn quarter_period_comp(&self) -> f64 {
        self.comp.quarter
    }

    /// Grötzsch value `mu(ell) = (pi/2) K(ell') / K(ell)`.
    pub fn mu(&self) -> f64 {
        FRAC_PI_2 * self.comp.quarter / self.fwd.quarter
    }

    /// `log(rho) = pi K(ell) / K(ell')`.
    pub fn log_rho(&self) -> f64 {
        PI * self.fwd.quarter / self.comp.quarter
    }

    /// Growth rate `rho = exp(pi K(ell) / K(ell'))`.
    pub fn rho(&self) -> f64 {
        self.log_rho().exp()
    }

    /// Jacobi functions at modulus `ell`.
    pub fn jacobi(&self) -> &Jacobi {
        &self.fwd
    }

    /// Jacobi functions at modulus `ell'`.
    pub fn jacobi_comp(&self) -> &Jacobi {
        &self.comp
    }
}

/// Grötzsch ring function `mu(ell)`.
pub fn groetzsch_mu(ell: f64) -> Result<f64> {
    Ok(EllipticModulus::new(ell)?.mu())
}

/// `theta_2^2 / theta_3^2` and `theta_4^2 / theta_3^2` at nome `q = exp(-log_q_inv)`,
/// for `q <= exp(-pi)`.
fn theta_quotients(log_q_inv: f64) -> (f64, f64) {
    let q = (-log_q_inv).exp();
    // theta_2 / (2 q^{1/4}) = sum q^{n(n+1)}
    let mut t2 = 1.0;
    let mut t3 = 1.0;
    let mut t4 = 1.0;
    for n in 1..32_i32 {
        let p2 = q.powi(n * (n + 1));
        let p3 = q.powi(n * n);
        t2 += p2;
        t3 += 2.0 * p3;
        t4 += if n % 2 == 0 { 2.0 * p3 } else { -2.0 * p3 };
        if p3 < 1e-18 {
            break;
        }
    }
    // theta_2^2 = 4 q^{1/2} t2^2
    let k = 4.0 * (-0.5 * log_q_inv).exp() * (t2 / t3) * (t2 / t3);
    let kc = (t4 / t3) * (t4 / t3);
    (k, kc)
}

/// Modulus pair `(ell, ell')` with `mu(ell) = v`, from the nome expansions
/// `ell = theta_2^2/theta_3^2`, `ell' = theta_4^2/theta_3^2`.
pub fn mu_inverse_pair(v: f64) -> Result<(f64, f64)> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(domain("v", v, "Grötzsch value must be positive and finite"));
    }
    // q = exp(-2 mu); the complementary nome is exp(-pi^2 / (2 mu)).
    let (k, kc) = if v >= FRAC_PI_2 {
        theta_quotients(2.0 * v)
    } else {
        let (a, b) = theta_quotients(PI * PI / (2.0 * v));
        (b, a)
    };
    if !(k > 0.0 && k <= 1.0 && kc > 0.0 && kc <= 1.0) {
        return Err(Error::Convergence {
            what: "Grötzsch inverse (modulus underflow)",
            residual: v,
        });
    }
    let check = EllipticModulus::from_pair(k, kc)?;
    let residual = (check.mu() - v).abs();
    if residual > 1e-13_f64.max(16.0 * f64::EPSILON * v) {
        return Err(Error::Convergence {
            what: "Grötzsch inverse",
            residual,
        });
    }
    Ok((k, kc))
}

/// `ell` in `(0, 1)` with `mu(ell) = v`.
pub fn mu_inverse(v: f64) -> Result<f64> {
    mu_inverse_pair(v).map(|(k, _)| k)
}

/// The data of the degree equation `K(ell)/K(ell') = K(lambda)/(m K(lambda'))`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeReduction {
    m: usize,
    lambda: f64,
    lambda_comp: f64,
    scale: f64,
    nu: f64,
    nodes: Vec<f64>,
    reduced: Option<EllipticModulus>,
}

impl DegreeReduction {
    pub fn new(modulus: &EllipticModulus, m: usize) -> Result<Self> {
        let kp = modulus.quarter_period_comp();
        let nu = 1.0 / modulus.mu();
        let nodes = if m <= 1 {
            Vec::new()
        } else {
            (1..2 * m)
                .map(|j| j as f64 / m as f64 * kp)
                .collect()
        };
        let (lambda, lambda_comp, reduced) = match m {
            0 => (0.0, 1.0, None),
            1 => (modulus.ell(), modulus.ell_comp(), Some(modulus.clone())),
            _ => {
                let (l, lc) = mu_inverse_pair(modulus.mu() / m as f64)?;
                (l, lc, Some(EllipticModulus::from_pair(l, lc)?))
            }
        };
        let scale = match &reduced {
            Some(r) if m > 1 => modulus.quarter_period() / r.quarter_period(),
            _ => 1.0,
        };
        Ok(Self {
            m,
            lambda,
            lambda_comp,
            scale,
            nu,
            nodes,
            reduced,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn lambda_comp(&self) -> f64 {
        self.lambda_comp
    }

    /// `M = K(ell) / K(lambda)`; 1 when `m = 0`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `nu = 1 / mu(ell)`.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `v_j = (j/m) K(ell')`, `j = 1..2m-1`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// The reduced modulus `lambda` as a full modulus (absent for `m = 0`).
    pub fn reduced(&self) -> Option<&EllipticModulus> {
        self.reduced.as_ref()
    }

    /// `arccos(lambda)`, computed from `lambda'` to keep full precision
    /// when `lambda` is close to 1.
    pub fn arccos_lambda(&self) -> f64 {
        self.lambda_comp.min(1.0).asin().min(FRAC_PI_2)
    }
}

/// Degree reduction at `(ell, m)`.
pub fn solve_lambda(ell: f64, m: usize) -> Result<DegreeReduction> {
    DegreeReduction::new(&EllipticModulus::new(ell)?, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn k_at_zero_is_half_pi() {
        assert_eq!(complete_k(0.0).unwrap(), FRAC_PI_2);
    }

    #[test]
    fn k_self_complementary() {
        let m = EllipticModulus::new(FRAC_1_SQRT_2).unwrap();
        let rel = (m.quarter_period() - m.quarter_period_comp()).abs() / m.quarter_period();
        assert!(rel < 1e-15, "{rel}");
        assert!((groetzsch_mu(FRAC_1_SQRT_2).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn k_domain_errors() {
        assert!(complete_k(-0.1).is_err());
        assert!(complete_k(1.0).is_err());
        assert!(groetzsch_mu(0.0).is_err());
        assert!(groetzsch_mu(1.0).is_err());
    }

    #[test]
    fn sncndn_special_values() {
        for &ell in &[0.0, 0.3, 0.9, 0.999_999] {
            let j = Jacobi::new(ell).unwrap();
            assert_eq!(j.sncndn(0.0), (0.0, 1.0, 1.0));
            let (sn, cn, dn) = j.sncndn(j.quarter_period());
            assert!((sn - 1.0).abs() < 1e-15);
            assert!(cn.abs() < 1e-15);
            assert!((dn - j.kc()).abs() < 1e-15);
            let (sn, cn, dn) = j.sncndn_at_fraction(1.0);
            assert_eq!((sn, cn), (1.0, 0.0));
            assert_eq!(dn, j.kc());
        }
    }

    #[test]
    fn sncndn_zero_modulus_is_circular() {
        let (sn, cn, dn) = jacobi_sncndn(0.7, 0.0).unwrap();
        assert!((sn - 0.7_f64.sin()).abs() < 1e-15);
        assert!((cn - 0.7_f64.cos()).abs() < 1e-15);
        assert_eq!(dn, 1.0);
    }

    #[test]
    fn inverse_sn_special_values() {
        let j = Jacobi::new(0.6).unwrap();
        assert_eq!(j.inverse_sn(0.0).unwrap(), 0.0);
        assert!((j.inverse_sn(1.0).unwrap() - j.quarter_period()).abs() < 1e-14);
        assert!((j.inverse_sn(-1.0).unwrap() + j.quarter_period()).abs() < 1e-14);
        assert!(j.inverse_sn(1.0 + 1e-12).is_err());
    }

    #[test]
    fn mu_decreases() {
        assert!(groetzsch_mu(0.99).unwrap() < FRAC_PI_2);
        assert!(groetzsch_mu(0.01).unwrap() > FRAC_PI_2);
    }

    #[test]
    fn mu_inverse_special_values() {
        assert!((mu_inverse(FRAC_PI_2).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        let v = groetzsch_mu(0.3).unwrap();
        assert!((mu_inverse(v).unwrap() - 0.3).abs() < 1e-12);
        assert!(mu_inverse(0.0).is_err());
        assert!(mu_inverse(-1.0).is_err());
    }

    #[test]
    fn solve_lambda_trivial_degrees() {
        let d = solve_lambda(0.4, 1).unwrap();
        assert_eq!(d.lambda(), 0.4);
        assert_eq!(d.scale(), 1.0);
        assert!(d.nodes().is_empty());
        let d = solve_lambda(0.4, 0).unwrap();
        assert_eq!(d.lambda(), 0.0);
        assert_eq!(d.lambda_comp(), 1.0);
        assert_eq!(d.scale(), 1.0);
        assert!(d.reduced().is_none());
    }

    #[test]
    fn degree_equation_residual() {
        let m = EllipticModulus::new(0.5).unwrap();
        for deg in 2..10 {
            let d = DegreeReduction::new(&m, deg).unwrap();
            let r = d.reduced().unwrap();
            let lhs = m.quarter_period() / m.quarter_period_comp();
            let rhs = r.quarter_period() / (deg as f64 * r.quarter_period_comp());
            assert!(((lhs - rhs) / lhs).abs() < 1e-12, "m={deg}");
            assert_eq!(d.nodes().len(), 2 * deg - 1);
            assert!((d.scale() - m.quarter_period() / r.quarter_period()).abs() < 1e-15);
        }
    }
}
