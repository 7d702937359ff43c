//! Extended-precision measurement of the optimal circle approximants.
//!
//! At small degree-to-angle ratios the optimal phase error and the bound
//! `4 rho^{-m/2}` agree to within `1e-21`, far below what a double-precision
//! evaluation can resolve, and at high degree the error itself drops below
//! double-precision rounding. This module recomputes the coefficients, the
//! phase error and both bounds with floats whose width grows with the
//! expected error exponent.
//!
//! The phase error is maximized over the arc endpoints and its critical
//! points. Those are the preimages `x_k = l / dn(k K'/m, l')`, `k` even, of
//! the points where Zolotarev's fraction attains `lambda`, each polished by a secant
//! iteration on the analytic derivative of the phase. Optional seeds (for
//! instance the extrema of a double-precision scan) are polished and added.
//!
//! Like the rest of the oracle it is self-contained: the Jacobi functions are
//! rebuilt from their own AGM sequence.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use astro_float::{BigFloat, Consts, RoundingMode};

use crate::error::{domain, Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Guard bits on top of the expected error exponent.
const GUARD_BITS: usize = 192;

/// Outcome of one bound check, carried out entirely in extended precision.
///
/// The plain values may underflow in `f64` at high degree; the logarithms
/// and the two verdicts do not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub measured: f64,
    pub bound_rho: f64,
    pub bound_secant: f64,
    /// `bound_rho - measured`, rounded after the subtraction.
    pub margin_rho: f64,
    /// `bound_secant - bound_rho`, rounded after the subtraction.
    pub margin_secant: f64,
    pub ln_measured: f64,
    pub ln_bound_rho: f64,
    pub ln_bound_secant: f64,
    /// `measured <= bound_rho`, decided before rounding.
    pub rho_holds: bool,
    /// `bound_rho <= bound_secant`, decided before rounding.
    pub secant_holds: bool,
    /// Working precision in bits.
    pub precision: usize,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.rho_holds && self.secant_holds
    }
}

fn to_f64(x: &BigFloat) -> f64 {
    x.to_string().parse().unwrap_or(f64::NAN)
}

fn less(a: &BigFloat, b: &BigFloat) -> bool {
    a.cmp(b).is_some_and(|c| c < 0)
}

fn abs(a: &BigFloat) -> BigFloat {
    if a.is_negative() {
        a.neg()
    } else {
        a.clone()
    }
}

/// Arithmetic at a fixed precision `p`.
struct Ctx {
    p: usize,
    cc: Consts,
    pi: BigFloat,
}

impl Ctx {
    fn new(p: usize) -> Result<Self> {
        let mut cc = Consts::new().map_err(|_| Error::Convergence {
            what: "extended-precision constants",
            residual: f64::NAN,
        })?;
        let pi = cc.pi(p, RM);
        Ok(Self { p, cc, pi })
    }

    fn num(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }

    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }

    /// `2^e`, built in steps small enough for `f64`.
    fn pow2(&self, e: i32) -> BigFloat {
        let mut r = self.num(1.0);
        let mut k = e;
        while k < -512 {
            r = self.mul(&r, &self.num(2.0_f64.powi(-512)));
            k += 512;
        }
        self.mul(&r, &self.num(2.0_f64.powi(k)))
    }

    fn half(&self, a: &BigFloat) -> BigFloat {
        self.div(a, &self.num(2.0))
    }

    fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.p, RM)
    }

    fn sin(&mut self, x: &BigFloat) -> BigFloat {
        x.sin(self.p, RM, &mut self.cc)
    }

    fn cos(&mut self, x: &BigFloat) -> BigFloat {
        x.cos(self.p, RM, &mut self.cc)
    }

    fn acos(&mut self, x: &BigFloat) -> BigFloat {
        x.acos(self.p, RM, &mut self.cc)
    }

    fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(self.p, RM, &mut self.cc)
    }

    fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(self.p, RM, &mut self.cc)
    }

    fn atan2(&mut self, y: &BigFloat, x: &BigFloat) -> BigFloat {
        let pi = self.pi.clone();
        if x.is_zero() {
            let h = self.half(&pi);
            return if y.is_negative() { h.neg() } else { h };
        }
        let t = self.div(y, x).atan(self.p, RM, &mut self.cc);
        if !x.is_negative() {
            t
        } else if y.is_negative() {
            self.sub(&t, &pi)
        } else {
            self.add(&t, &pi)
        }
    }

    /// Wrap into `(-pi, pi]`.
    fn wrap(&self, w: BigFloat) -> BigFloat {
        let two_pi = self.mul(&self.pi, &self.num(2.0));
        let turns = (to_f64(&w) / (2.0 * PI)).round();
        self.sub(&w, &self.mul(&two_pi, &self.num(turns)))
    }

    /// Arithmetic-geometric mean sequence of `(1, kc)`.
    fn agm(&self, kc: &BigFloat) -> Vec<(BigFloat, BigFloat)> {
        let tol = self.pow2(8 - self.p as i32);
        let mut a = self.num(1.0);
        let mut b = kc.clone();
        let mut seq = Vec::new();
        for _ in 0..96 {
            seq.push((a.clone(), b.clone()));
            if less(&abs(&self.sub(&a, &b)), &self.mul(&tol, &a)) {
                break;
            }
            let a_next = self.half(&self.add(&a, &b));
            b = self.sqrt(&self.mul(&a, &b));
            a = a_next;
        }
        seq
    }

    fn agm_mean(&self, seq: &[(BigFloat, BigFloat)]) -> BigFloat {
        let (a, b) = seq.last().expect("sequence is never empty");
        self.half(&self.add(a, b))
    }

    /// `(sn, cn, dn)` at `(p/q) K` for `0 < p < q`, by descending Landen.
    fn sncndn_fraction(&mut self, seq: &[(BigFloat, BigFloat)], p: usize, q: usize) -> (BigFloat, BigFloat, BigFloat) {
        let mean = self.agm_mean(seq);
        let v = self.div(&self.mul(&self.num(p as f64), &self.pi), &self.num(2.0 * q as f64));
        let (s0, c0) = (self.sin(&v), self.cos(&v));
        let mut ratio = self.div(&c0, &s0);
        let mut c = self.mul(&mean, &ratio);
        let mut dn = self.num(1.0);
        for (a, b) in seq.iter().rev() {
            ratio = self.mul(&ratio, &c);
            c = self.mul(&c, &dn);
            dn = self.div(&self.add(b, &ratio), &self.add(a, &ratio));
            ratio = self.div(&c, a);
        }
        let one = self.num(1.0);
        let sn = self.div(&one, &self.sqrt(&self.add(&self.mul(&c, &c), &one)));
        (sn.clone(), self.mul(&c, &sn), dn)
    }
}

/// Double-precision `log rho` from a local AGM, used only to size the precision.
fn log_rho_estimate(theta: f64) -> f64 {
    let agm = |mut a: f64, mut b: f64| {
        for _ in 0..64 {
            if (a - b).abs() <= 4.0 * f64::EPSILON * a {
                break;
            }
            (a, b) = (0.5 * (a + b), (a * b).sqrt());
        }
        0.5 * (a + b)
    };
    PI * agm(1.0, theta.cos()) / agm(1.0, theta.sin())
}

/// `ell = cos theta`, the Jacobi data at `ell' = sin theta`, and `log rho`.
struct Moduli {
    ell: BigFloat,
    comp_seq: Vec<(BigFloat, BigFloat)>,
    log_rho: BigFloat,
}

impl Moduli {
    fn new(ctx: &mut Ctx, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(domain("theta", theta, "half-width must lie in (0, pi/2)"));
        }
        let t = ctx.num(theta);
        let ell = ctx.cos(&t);
        let ell_comp = ctx.sin(&t);
        // the sequence for modulus ell' starts from its complement ell
        let comp_seq = ctx.agm(&ell);
        let fwd_seq = ctx.agm(&ell_comp);
        // log rho = pi K(ell) / K(ell') = pi agm(1, ell) / agm(1, ell')
        let log_rho = ctx.div(&ctx.mul(&ctx.pi, &ctx.agm_mean(&comp_seq)), &ctx.agm_mean(&fwd_seq));
        Ok(Self { ell, comp_seq, log_rho })
    }

    /// `(ell sn + dn) / cn` at `p/q` quarter periods of modulus `ell'`,
    /// for `p < 2q`; `None` where `cn` vanishes.
    fn node_base(&self, ctx: &mut Ctx, p: usize, q: usize) -> Option<BigFloat> {
        if p == q {
            return None;
        }
        // sn and dn are symmetric about K, cn changes sign
        let (p, negate) = if p > q { (2 * q - p, true) } else { (p, false) };
        let (sn, cn, dn) = ctx.sncndn_fraction(&self.comp_seq, p, q);
        let base = ctx.div(&ctx.add(&ctx.mul(&self.ell, &sn), &dn), &cn);
        Some(if negate { base.neg() } else { base })
    }

    /// `arccos(ell / dn(k K'/m, ell'))` for even `k` in `0..=m`, where
    /// Zolotarev's fraction takes its minimum `lambda`. Odd `k` (value 1)
    /// are zeros of the phase error, not extrema.
    fn critical_angles(&self, ctx: &mut Ctx, m: usize) -> Vec<BigFloat> {
        (0..=m)
            .step_by(2)
            .map(|k| {
                let x = if k == 0 {
                    self.ell.clone()
                } else if k == m {
                    ctx.num(1.0)
                } else {
                    let (_, _, dn) = ctx.sncndn_fraction(&self.comp_seq, k, m);
                    ctx.div(&self.ell, &dn)
                };
                ctx.acos(&x)
            })
            .collect()
    }
}

/// `b_j` for `j = 1..=m`; `None` is the factor at infinity.
fn coeffs_b(ctx: &mut Ctx, moduli: &Moduli, m: usize) -> Vec<Option<BigFloat>> {
    (1..=m)
        .map(|j| {
            let odd_j = j % 2 == 1;
            match moduli.node_base(ctx, 2 * j - 1, m) {
                None if odd_j => Some(ctx.num(0.0)),
                None => None,
                Some(base) => {
                    let v = if odd_j { ctx.div(&ctx.num(1.0), &base) } else { base };
                    Some(if (m * j) % 2 == 1 { v.neg() } else { v })
                }
            }
        })
        .collect()
}

fn coeffs_a(ctx: &mut Ctx, moduli: &Moduli, n: usize) -> Vec<BigFloat> {
    (1..=n)
        .map(|j| {
            let base = moduli
                .node_base(ctx, 2 * j - 1, 2 * n + 1)
                .expect("nodes of r_n avoid the quarter period");
            let sq = ctx.mul(&base, &base);
            if (j + n).is_multiple_of(2) {
                sq
            } else {
                ctx.div(&ctx.num(1.0), &sq)
            }
        })
        .collect()
}

/// The two circle problems, with their phase and its derivative in `theta`.
enum Shape {
    Sign(Vec<Option<BigFloat>>),
    Sqrt(Vec<BigFloat>),
}

impl Shape {
    fn angle(ctx: &Ctx, offset: &BigFloat, flip: bool) -> BigFloat {
        if flip {
            ctx.add(&ctx.pi, offset)
        } else {
            offset.clone()
        }
    }

    /// Signed phase error at `theta = offset`, or at `theta = pi + offset`
    /// on the arc around `-1` when `flip` is set.
    ///
    /// Each factor contributes `arg(w_j^2) - theta` for a complex `w_j`; the
    /// `w_j^2` are multiplied out so that a single `atan2` is needed.
    fn phase(&self, ctx: &mut Ctx, offset: &BigFloat, flip: bool) -> BigFloat {
        let theta = Self::angle(ctx, offset, flip);
        let (s, c) = (ctx.sin(&theta), ctx.cos(&theta));
        let one = ctx.num(1.0);
        let mut re = one.clone();
        let mut im = ctx.num(0.0);
        let mut times = |x: BigFloat, y: BigFloat| {
            let (x2, y2) = (ctx.sub(&ctx.mul(&x, &x), &ctx.mul(&y, &y)), ctx.mul(&ctx.num(2.0), &ctx.mul(&x, &y)));
            let r = ctx.sub(&ctx.mul(&re, &x2), &ctx.mul(&im, &y2));
            im = ctx.add(&ctx.mul(&re, &y2), &ctx.mul(&im, &x2));
            re = r;
        };
        // constant part in half turns, and the number of factors
        let (half_turns, count) = match self {
            Shape::Sign(bs) => {
                let mut infinite = 0;
                for b in bs {
                    match b {
                        Some(b) => times(c.clone(), ctx.sub(&s, b)),
                        None => infinite += 1,
                    }
                }
                let base = 0.5 * (1.0 - bs.len() as f64) + infinite as f64 + if flip { 1.0 } else { 0.0 };
                (base, bs.len() as f64)
            }
            Shape::Sqrt(avals) => {
                for a in avals {
                    times(ctx.add(&one, &ctx.mul(a, &c)), ctx.mul(a, &s));
                }
                (0.0, avals.len() as f64 + 0.5)
            }
        };
        let mut w = ctx.atan2(&im, &re);
        w = ctx.add(&w, &ctx.mul(&ctx.pi, &ctx.num(half_turns)));
        w = ctx.sub(&w, &ctx.mul(&theta, &ctx.num(count)));
        ctx.wrap(w)
    }

    fn derivative(&self, ctx: &mut Ctx, offset: &BigFloat, flip: bool) -> BigFloat {
        let theta = Self::angle(ctx, offset, flip);
        let (s, c) = (ctx.sin(&theta), ctx.cos(&theta));
        let one = ctx.num(1.0);
        let two = ctx.num(2.0);
        let mut d = ctx.num(0.0);
        match self {
            Shape::Sign(bs) => {
                for b in bs {
                    let term = match b {
                        // (1 - b^2) / (1 + b^2 - 2 b sin)
                        Some(b) => {
                            let b2 = ctx.mul(b, b);
                            let den = ctx.sub(&ctx.add(&one, &b2), &ctx.mul(&two, &ctx.mul(b, &s)));
                            ctx.div(&ctx.sub(&one, &b2), &den)
                        }
                        None => one.neg(),
                    };
                    d = ctx.add(&d, &term);
                }
            }
            Shape::Sqrt(avals) => {
                for a in avals {
                    // (a^2 - 1) / (1 + 2 a cos + a^2)
                    let a2 = ctx.mul(a, a);
                    let den = ctx.add(&ctx.add(&one, &a2), &ctx.mul(&two, &ctx.mul(a, &c)));
                    d = ctx.add(&d, &ctx.div(&ctx.sub(&a2, &one), &den));
                }
                d = ctx.sub(&d, &ctx.num(0.5));
            }
        }
        d
    }
}

/// Secant iteration on the phase derivative, started at `start`, kept
/// inside `[-half, half]`.
fn polish(ctx: &mut Ctx, shape: &Shape, start: BigFloat, half: f64, flip: bool) -> Result<BigFloat> {
    let mut t0 = start;
    let mut d0 = shape.derivative(ctx, &t0, flip);
    if d0.is_zero() {
        return Ok(t0);
    }
    let s0 = to_f64(&t0);
    let step = 1e-9 * half;
    let mut t1 = ctx.add(&t0, &ctx.num(if s0 + step < half { step } else { -step }));
    let mut d1 = shape.derivative(ctx, &t1, flip);
    let tol = ctx.pow2(48 - ctx.p as i32);
    // the derivative is a cancelling sum, so it bottoms out well above one ulp
    let flat = ctx.pow2(64 - ctx.p as i32);
    for _ in 0..100 {
        let dd = ctx.sub(&d1, &d0);
        if dd.is_zero() {
            return Ok(t1);
        }
        let t2 = ctx.sub(&t1, &ctx.div(&ctx.mul(&d1, &ctx.sub(&t1, &t0)), &dd));
        let t2f = to_f64(&t2);
        if !(t2f.abs() <= half) {
            return Err(Error::Convergence {
                what: "extremum polishing left the arc",
                residual: t2f,
            });
        }
        let moved = abs(&ctx.sub(&t2, &t1));
        (t0, d0, t1) = (t1, d1, t2);
        d1 = shape.derivative(ctx, &t1, flip);
        if less(&moved, &tol) || less(&abs(&d1), &flat) {
            return Ok(t1);
        }
    }
    Err(Error::Convergence {
        what: "extremum polishing",
        residual: to_f64(&d1),
    })
}

/// Largest `|phase error|` over the arcs.
///
/// Each arc is `(half_width, flip)`: offsets in `[-half_width, half_width]`
/// around `1`, or around `-1` when `flip` is set. `critical` holds the
/// nonnegative critical offsets, used with both signs; those at the arc
/// edge or at zero are taken as they are. `seeds` are absolute angles.
fn measure(
    ctx: &mut Ctx,
    shape: &Shape,
    arcs: &[(f64, bool)],
    critical: &[BigFloat],
    seeds: &[f64],
) -> Result<BigFloat> {
    let mut best = ctx.num(0.0);
    for &(half, flip) in arcs {
        let center = if flip { PI } else { 0.0 };
        let edge = ctx.num(half);
        let mut points = vec![edge.neg(), edge];
        for c in critical {
            if c.is_zero() {
                points.push(c.clone());
                continue;
            }
            let gap = abs(&ctx.sub(c, &ctx.num(half)));
            if less(&gap, &ctx.num(1e-9 * half)) {
                continue;
            }
            for start in [c.clone(), c.neg()] {
                points.push(polish(ctx, shape, start, half, flip)?);
            }
        }
        for &seed in seeds {
            let offset = seed - center;
            if !(offset.abs() < half * (1.0 - 1e-9)) {
                continue;
            }
            let start = ctx.num(offset);
            points.push(polish(ctx, shape, start, half, flip)?);
        }
        for t in &points {
            let e = abs(&shape.phase(ctx, t, flip));
            if less(&best, &e) {
                best = e;
            }
        }
    }
    Ok(best)
}

fn finish(ctx: &mut Ctx, measured: BigFloat, rho_exponent: BigFloat, secant_exponent: BigFloat) -> BoundCheck {
    let four = ctx.num(4.0);
    let ln4 = ctx.ln(&four);
    let e1 = ctx.exp(&rho_exponent.neg());
    let e2 = ctx.exp(&secant_exponent.neg());
    let b1 = ctx.mul(&four, &e1);
    let b2 = ctx.mul(&four, &e2);
    let m1 = ctx.sub(&b1, &measured);
    let m2 = ctx.sub(&b2, &b1);
    let ln_measured = if measured.is_zero() { f64::NEG_INFINITY } else { to_f64(&ctx.ln(&measured)) };
    BoundCheck {
        measured: to_f64(&measured),
        bound_rho: to_f64(&b1),
        bound_secant: to_f64(&b2),
        margin_rho: to_f64(&m1),
        margin_secant: to_f64(&m2),
        ln_measured,
        ln_bound_rho: to_f64(&ctx.sub(&ln4, &rho_exponent)),
        ln_bound_secant: to_f64(&ctx.sub(&ln4, &secant_exponent)),
        rho_holds: !m1.is_negative(),
        secant_holds: !m2.is_negative(),
        precision: ctx.p,
    }
}

/// `pi^2 d / (c log(4 sec theta))`.
fn secant_exponent(ctx: &mut Ctx, theta: f64, d: f64, c: f64) -> BigFloat {
    let cos = ctx.cos(&ctx.num(theta));
    let lfs = ctx.ln(&ctx.div(&ctx.num(4.0), &cos));
    let pi2 = ctx.mul(&ctx.pi, &ctx.pi);
    ctx.div(&ctx.mul(&pi2, &ctx.num(d)), &ctx.mul(&ctx.num(c), &lfs))
}

/// Precision for an error of size about `exp(-exponent)`.
///
/// The gap to `4 rho^{-d}` is only about `rho^{-2d}` relative, so the
/// phase sums must resolve `exp(-3 exponent)` absolutely.
fn precision_for(exponent: f64) -> usize {
    let bits = GUARD_BITS + (3.0 * exponent.max(0.0) / LN_2).ceil() as usize;
    bits.div_ceil(64) * 64
}

/// Phase error of the optimal `sign z` approximant of degree `m` on both
/// arcs of half-width `theta`, against `4 rho^{-m/2}` and the secant bound.
///
/// `seeds` are optional extra candidate angles in `[-theta, theta]` or
/// `[pi - theta, pi + theta]`.
pub fn sign_bound_check(m: usize, theta: f64, seeds: &[f64]) -> Result<BoundCheck> {
    let p = precision_for(0.5 * m as f64 * log_rho_estimate(theta));
    let mut ctx = Ctx::new(p)?;
    let moduli = Moduli::new(&mut ctx, theta)?;
    let shape = Shape::Sign(coeffs_b(&mut ctx, &moduli, m));
    let critical = if m == 0 { Vec::new() } else { moduli.critical_angles(&mut ctx, m) };
    let measured = measure(&mut ctx, &shape, &[(theta, false), (theta, true)], &critical, seeds)?;
    let rho_exp = ctx.mul(&ctx.num(0.5 * m as f64), &moduli.log_rho);
    let sec_exp = secant_exponent(&mut ctx, theta, m as f64, 4.0);
    Ok(finish(&mut ctx, measured, rho_exp, sec_exp))
}

/// Phase error of the optimal `sqrt z` approximant `r_n` on the arc of
/// half-width `2 theta`, against the `(n + 1/2)` forms of both bounds.
pub fn sqrt_bound_check(n: usize, theta: f64, seeds: &[f64]) -> Result<BoundCheck> {
    let d = n as f64 + 0.5;
    let p = precision_for(d * log_rho_estimate(theta));
    let mut ctx = Ctx::new(p)?;
    let moduli = Moduli::new(&mut ctx, theta)?;
    let shape = Shape::Sqrt(coeffs_a(&mut ctx, &moduli, n));
    // r_n(z^2) relates to s_{2n+1}(z), so its critical angles are doubled
    let two = ctx.num(2.0);
    let critical: Vec<BigFloat> = moduli
        .critical_angles(&mut ctx, 2 * n + 1)
        .iter()
        .map(|t| ctx.mul(&two, t))
        .collect();
    let measured = measure(&mut ctx, &shape, &[(2.0 * theta, false)], &critical, seeds)?;
    let rho_exp = ctx.mul(&ctx.num(d), &moduli.log_rho);
    let sec_exp = secant_exponent(&mut ctx, theta, d, 2.0);
    Ok(finish(&mut ctx, measured, rho_exp, sec_exp))
}

/// Extended-precision `b_j` of the sign approximant, rounded to `f64`;
/// `None` is the factor at infinity.
pub fn sign_coefficients(m: usize, theta: f64) -> Result<Vec<Option<f64>>> {
    let mut ctx = Ctx::new(precision_for(0.0))?;
    let moduli = Moduli::new(&mut ctx, theta)?;
    Ok(coeffs_b(&mut ctx, &moduli, m).iter().map(|b| b.as_ref().map(to_f64)).collect())
}

/// Extended-precision `a_j` of the square-root approximant, rounded to `f64`.
pub fn sqrt_coefficients(n: usize, theta: f64) -> Result<Vec<f64>> {
    let mut ctx = Ctx::new(precision_for(0.0))?;
    let moduli = Moduli::new(&mut ctx, theta)?;
    Ok(coeffs_a(&mut ctx, &moduli, n).iter().map(to_f64).collect())
}
