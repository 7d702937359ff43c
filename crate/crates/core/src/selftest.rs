//! The acceptance sweep behind the `selftest` command.
//!
//! Each criterion is a function returning a [`CriterionOutcome`]; a numerical
//! failure inside a criterion counts as a failed criterion rather than
//! aborting the sweep.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use num_complex::Complex64;

use crate::analysis::{
    phase_error_from_z, phase_error_sign, phase_error_sqrt, zolotarev_number, PhaseErrorReport,
};
use crate::approximants::{build_r, build_s, coeff_a, eval_s_via_fg, Family, FactorParam, UnimodularRational, ZolotarevFraction};
use crate::composition::{circle_samples, compose_f, compose_r, compose_s, compose_s_tilde, max_residual};
use crate::connections::{blaschke_s_relation, compose_h, kappa, pade_limit_check, pade_p, pade_pole_formula};
use crate::elliptic::{complete_k, solve_lambda, EllipticModulus, Jacobi};
use crate::error::Result;
use crate::oracle::precise::{sign_bound_check, sqrt_bound_check};
use crate::oracle::{integrate_amplitude, oracle_k, oracle_minimax_degree1};

/// Arc half-widths of the sweep.
pub const THETAS: [f64; 4] = [0.5, 1.0, 1.4, FRAC_PI_2 - 0.1];

/// Largest sign degree of the sweep.
pub const MAX_SIGN_DEGREE: usize = 8;

/// Largest square-root degree of the sweep.
pub const MAX_SQRT_DEGREE: usize = 4;

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed quantity, or the first failure.
    pub detail: String,
    pub elapsed: Duration,
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {} [{}] {}: {} ({:.2} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Worst value seen so far against a limit.
struct Tally {
    worst: f64,
    limit: f64,
    label: &'static str,
    failure: Option<String>,
}

impl Tally {
    fn new(label: &'static str, limit: f64) -> Self {
        Self {
            worst: 0.0,
            limit,
            label,
            failure: None,
        }
    }

    fn see(&mut self, v: f64, context: impl FnOnce() -> String) {
        if !(v <= self.limit) && self.failure.is_none() {
            self.failure = Some(format!("{} = {v:e} > {:e} at {}", self.label, self.limit, context()));
        }
        if v.is_nan() || v > self.worst {
            self.worst = v;
        }
    }

    fn fail(&mut self, msg: String) {
        self.failure.get_or_insert(msg);
    }

    fn ok(&self) -> bool {
        self.failure.is_none()
    }

    fn summary(&self) -> String {
        match &self.failure {
            Some(f) => f.clone(),
            None => format!("max {} = {:e} (limit {:e})", self.label, self.worst, self.limit),
        }
    }
}

fn run(id: u8, name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> CriterionOutcome {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionOutcome {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

fn summarize(tallies: &[&Tally]) -> (bool, String) {
    let ok = tallies.iter().all(|t| t.ok());
    let text = tallies.iter().map(|t| t.summary()).collect::<Vec<_>>().join("; ");
    (ok, text)
}

fn sign_report(m: usize, theta: f64, grid: usize) -> Result<PhaseErrorReport> {
    phase_error_sign(&build_s(m, theta)?, theta, grid)
}

fn sqrt_report(n: usize, theta: f64, grid: usize) -> Result<PhaseErrorReport> {
    phase_error_sqrt(&build_r(n, theta)?, theta, grid)
}

fn sign_grid(m: usize) -> usize {
    64 * (m + 1)
}

fn sqrt_grid(n: usize) -> usize {
    128 * (n + 1)
}

/// Circle points at half-step offsets, avoiding `+-1` and `+-i`.
fn circle(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / n as f64))
        .collect()
}

/// `r_n` with its second coefficient shifted by `delta`.
pub fn tampered_r(n: usize, theta: f64, delta: f64) -> Result<UnimodularRational> {
    let r = build_r(n, theta)?;
    let mut params: Vec<FactorParam> = r.factors().to_vec();
    if let Some(FactorParam::Finite(a)) = params.get_mut(1.min(n.saturating_sub(1))) {
        *a += delta;
    }
    Ok(UnimodularRational::new(r.z_power(), r.quarter_turns() as i32, params, Family::R))
}

/// Whether the measured phase error of `r` reaches `arccos(lambda)` with
/// the full alternation count. A perturbed coefficient must fail this.
pub fn sqrt_amplitude_matches(r: &UnimodularRational, n: usize, theta: f64) -> bool {
    let want = match solve_lambda(theta.cos(), 2 * n + 1) {
        Ok(d) => d.arccos_lambda(),
        Err(_) => return false,
    };
    match phase_error_sqrt(r, theta, sqrt_grid(n)) {
        Ok(rep) => (rep.max_error - want).abs() <= 1e-9 && rep.equioscillates(),
        Err(_) => false,
    }
}

/// Measured phase error equals `arccos(lambda)` on the whole sweep, the
/// tampered `r_3` is rejected, and the sweep stays within its time budget.
pub fn criterion_1() -> CriterionOutcome {
    run(1, "optimal error equals arccos(lambda)", || {
        let start = Instant::now();
        let mut t = Tally::new("|measured - arccos(lambda)|", 1e-9);
        for &theta in &THETAS {
            for m in 1..=MAX_SIGN_DEGREE {
                let rep = sign_report(m, theta, sign_grid(m))?;
                let want = solve_lambda(theta.cos(), m)?.arccos_lambda();
                t.see((rep.max_error - want).abs(), || format!("sign m={m} theta={theta}"));
            }
            for n in 0..=MAX_SQRT_DEGREE {
                let rep = sqrt_report(n, theta, sqrt_grid(n))?;
                let want = solve_lambda(theta.cos(), 2 * n + 1)?.arccos_lambda();
                t.see((rep.max_error - want).abs(), || format!("sqrt n={n} theta={theta}"));
            }
        }
        let elapsed = start.elapsed().as_secs_f64();
        if elapsed > 5.0 {
            t.fail(format!("sweep took {elapsed:.2} s, budget 5 s"));
        }
        if sqrt_amplitude_matches(&tampered_r(3, 1.0, 1e-6)?, 3, 1.0) {
            t.fail("a tampered coefficient went undetected".into());
        }
        Ok(summarize(&[&t]))
    })
}

/// Alternation counts `m + 1` per arc and `2n + 2`, with the endpoints
/// attained, unchanged under grid doubling.
pub fn criterion_2() -> CriterionOutcome {
    run(2, "equioscillation certificate", || {
        let mut bad = Vec::new();
        let mut cases = 0;
        for &theta in &THETAS {
            for m in 1..=MAX_SIGN_DEGREE {
                for grid in [sign_grid(m), 2 * sign_grid(m)] {
                    let rep = sign_report(m, theta, grid)?;
                    cases += 1;
                    if !rep.arcs.iter().all(|a| a.alternations == m + 1 && a.endpoints_attained) {
                        bad.push(format!("sign m={m} theta={theta} grid={grid}"));
                    }
                }
            }
            for n in 0..=MAX_SQRT_DEGREE {
                for grid in [sqrt_grid(n), 2 * sqrt_grid(n)] {
                    let rep = sqrt_report(n, theta, grid)?;
                    cases += 1;
                    if !rep.arcs.iter().all(|a| a.alternations == 2 * n + 2 && a.endpoints_attained) {
                        bad.push(format!("sqrt n={n} theta={theta} grid={grid}"));
                    }
                }
            }
        }
        Ok(if bad.is_empty() {
            (true, format!("{cases} scans with exact counts"))
        } else {
            (false, format!("wrong counts at {}", bad.join(", ")))
        })
    })
}

/// `measured <= 4 rho^{-m/2} <= secant bound`, decided in extended
/// precision, and the Zolotarev-number chain.
pub fn criterion_3() -> CriterionOutcome {
    run(3, "a-priori error bounds", || {
        let mut bounds = Tally::new("bound violations", 0.0);
        let mut chain = Tally::new("|arccos(lambda(Z)) - measured|", 1e-10);
        let mut checks = 0;
        for &theta in &THETAS {
            for m in 1..=MAX_SIGN_DEGREE {
                let rep = sign_report(m, theta, sign_grid(m))?;
                let seeds: Vec<f64> = rep.extrema.iter().map(|e| e.theta).collect();
                let c = sign_bound_check(m, theta, &seeds)?;
                checks += 1;
                bounds.see(if c.holds() { 0.0 } else { 1.0 }, || format!("sign m={m} theta={theta}: {c:?}"));
                let z = zolotarev_number(m, theta)?;
                chain.see((phase_error_from_z(z)? - rep.max_error).abs(), || format!("m={m} theta={theta}"));
            }
            for n in 0..=MAX_SQRT_DEGREE {
                let rep = sqrt_report(n, theta, sqrt_grid(n))?;
                let seeds: Vec<f64> = rep.extrema.iter().map(|e| e.theta).collect();
                let c = sqrt_bound_check(n, theta, &seeds)?;
                checks += 1;
                bounds.see(if c.holds() { 0.0 } else { 1.0 }, || format!("sqrt n={n} theta={theta}: {c:?}"));
                let z = zolotarev_number(2 * n + 1, theta)?;
                chain.see((phase_error_from_z(z)? - rep.max_error).abs(), || format!("n={n} theta={theta}"));
            }
        }
        let (ok, text) = summarize(&[&chain]);
        Ok(if bounds.ok() {
            (ok, format!("{checks} bound chains hold; {text}"))
        } else {
            (false, format!("{}; {text}", bounds.summary()))
        })
    })
}

/// `s_{2n+1}(z)^{(-1)^n} r_n(z^2) = z` on 256 circle points.
pub fn criterion_4() -> CriterionOutcome {
    run(4, "odd sign approximant times sqrt approximant", || {
        let mut t = Tally::new("|s r - z|", 1e-11);
        for &theta in &THETAS {
            for n in 0..=3 {
                let s = build_s(2 * n + 1, theta)?;
                let s = if n % 2 == 1 { s.reciprocal() } else { s };
                let r = build_r(n, theta)?;
                for z in circle(256) {
                    let d = (s.eval(z)? * r.eval(z * z)? - z).norm();
                    t.see(d, || format!("n={n} theta={theta} z={z}"));
                }
            }
        }
        Ok(summarize(&[&t]))
    })
}

/// The factored `s_m` against the `F + iG` lift, and the elliptic against
/// the product evaluation of `(F, G)`.
pub fn criterion_5() -> CriterionOutcome {
    run(5, "circle lift and product forms", || {
        let mut lift = Tally::new("|s - (F + iG)|", 1e-11);
        for &theta in &THETAS {
            for m in 1..=MAX_SIGN_DEGREE {
                let s = build_s(m, theta)?;
                let zf = ZolotarevFraction::from_theta(m, theta)?;
                for z in circle(100) {
                    let d = (s.eval(z)? - eval_s_via_fg(&zf, z)?).norm();
                    lift.see(d, || format!("m={m} theta={theta} z={z}"));
                }
            }
        }
        let mut prod = Tally::new("|direct - product|", 1e-10);
        for &ell in &[0.1, 0.25, 0.5, 0.8, 0.95] {
            for m in 0..=9 {
                let zf = ZolotarevFraction::from_ell(m, ell)?;
                for i in 0..=400 {
                    let x = -1.0 + i as f64 / 200.0;
                    let (f1, g1) = zf.eval_direct(x)?;
                    let (f2, g2) = zf.eval_product(x)?;
                    prod.see((f1 - f2).abs().max((g1 - g2).abs()), || format!("m={m} ell={ell} x={x}"));
                }
            }
        }
        Ok(summarize(&[&lift, &prod]))
    })
}

/// Composition residuals for the sign, reciprocal-sign, square-root and
/// real problems.
pub fn criterion_6() -> CriterionOutcome {
    run(6, "composition laws", || {
        let samples = circle_samples(200);
        let mut sign = Tally::new("sign residual", 1e-9);
        for &(mt, m) in &[(2, 2), (2, 3), (3, 3), (3, 5)] {
            for &theta in &[1.0, FRAC_PI_2 - 0.01] {
                let res = max_residual(&samples, |z| compose_s(mt, m, theta, z))?;
                sign.see(res, || format!("({mt},{m}) theta={theta}"));
            }
        }
        let mut odd = Tally::new("odd-index residual", 1e-9);
        for &(nt, n) in &[(1, 1), (1, 2), (2, 1)] {
            for &theta in &[0.7, 1.2] {
                let a = max_residual(&samples, |z| compose_s_tilde(nt, n, theta, z))?;
                let b = max_residual(&samples, |z| compose_r(nt, n, theta, z))?;
                odd.see(a.max(b), || format!("({nt},{n}) theta={theta}"));
            }
        }
        let mut real = Tally::new("real residual", 1e-10);
        for &ell in &[0.1, 0.5, 0.9] {
            let modulus = EllipticModulus::new(ell)?;
            for &(mt, m) in &[(2, 2), (2, 3), (3, 2), (3, 3)] {
                for i in 0..=400 {
                    let x = -1.0 + i as f64 / 200.0;
                    let (l, r) = compose_f(mt, m, &modulus, x)?;
                    real.see((l - r).abs(), || format!("({mt},{m}) ell={ell} x={x}"));
                }
            }
        }
        Ok(summarize(&[&sign, &odd, &real]))
    })
}

/// Pade poles, the small-angle limit, and the Blaschke-product relations.
pub fn criterion_7() -> CriterionOutcome {
    run(7, "Pade limit and Blaschke connections", || {
        let mut poles = Tally::new("pole error", 1e-12);
        for n in 1..=8 {
            let p = pade_p(n)?;
            for (a, b) in p.poles.iter().zip(pade_pole_formula(n)) {
                poles.see((a - b).abs(), || format!("n={n}"));
            }
            if p.poles.len() != n {
                poles.fail(format!("p_{n} has {} poles", p.poles.len()));
            }
        }
        let mut limit = Tally::new("pole-set deviation at theta=1e-3", 1e-4);
        for n in 1..=4 {
            let d = pade_limit_check(n, &[1e-3])?[0];
            limit.see(d, || format!("n={n}"));
        }
        let mut blaschke = Tally::new("Blaschke residual", 1e-9);
        let samples = circle_samples(64);
        for &(mt, m) in &[(2, 2), (2, 3), (3, 2)] {
            for &ell in &[0.25, 0.6] {
                let res = max_residual(&samples, |z| compose_h(mt, m, ell, z))?;
                blaschke.see(res, || format!("h composition ({mt},{m}) ell={ell}"));
            }
        }
        for m in 1..=5 {
            for &ell in &[0.25_f64, 0.5, 0.8] {
                let t = (1.0 - ell.sqrt()) / (1.0 + ell.sqrt());
                let z_lo = (1.0 - t) / (1.0 + t);
                for i in 0..32 {
                    let z = z_lo + (i as f64 + 0.5) * 0.25;
                    let (l, r) = blaschke_s_relation(m, ell, z)?;
                    blaschke.see((l - r).abs(), || format!("s relation m={m} ell={ell} z={z}"));
                }
            }
        }
        if !(kappa(0.25) > 0.0 && kappa(0.25) < 1.0) {
            blaschke.fail("kappa outside (0, 1)".into());
        }
        Ok(summarize(&[&poles, &limit, &blaschke]))
    })
}

/// AGM against quadrature, Landen against the amplitude ODE, and the
/// brute-force degree-1 minimax against the closed form.
pub fn criterion_8() -> CriterionOutcome {
    run(8, "independent oracles", || {
        let mut k = Tally::new("|K_agm - K_quad|", 1e-11);
        let mut grid: Vec<f64> = (1..=19).map(|i| 0.05 * i as f64).collect();
        grid.extend([0.0, 0.99, 0.999]);
        for &ell in &grid {
            k.see((complete_k(ell)? - oracle_k(ell)?.value).abs(), || format!("ell={ell}"));
        }
        let mut sn = Tally::new("|Landen - ODE|", 1e-11);
        for &ell in &[0.05, 0.3, 0.5, 0.8, 0.95] {
            let j = Jacobi::new(ell)?;
            let kq = j.quarter_period();
            for i in -8..=8 {
                let u = 2.0 * kq * i as f64 / 8.0;
                let o = integrate_amplitude(u, ell, 1e-15)?;
                let (s, c, d) = j.sncndn(u);
                let e = (s - o.sn).abs().max((c - o.cn).abs()).max((d - o.dn).abs());
                sn.see(e, || format!("ell={ell} u={u}"));
            }
        }
        let mut minimax = Tally::new("|log a_search - log a_1| / log cell ratio", 1.0);
        for &theta in &[0.3, 0.7, 1.0, 1.3] {
            let scan = oracle_minimax_degree1(theta, 100_000)?;
            let a1 = coeff_a(1, 1, theta)?;
            minimax.see((scan.argmin / a1).ln().abs() / scan.cell_ratio.ln(), || format!("theta={theta}"));
            if !scan.unimodal {
                minimax.fail(format!("search profile not unimodal at theta={theta}"));
            }
        }
        Ok(summarize(&[&k, &sn, &minimax]))
    })
}

/// Criteria 1 to 8 in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tampering_changes_one_coefficient() {
        let r = build_r(3, 1.0).unwrap();
        let t = tampered_r(3, 1.0, 1e-6).unwrap();
        let diffs: Vec<f64> = r
            .factors()
            .iter()
            .zip(t.factors())
            .map(|(a, b)| (a.finite().unwrap() - b.finite().unwrap()).abs())
            .collect();
        assert_eq!(diffs.iter().filter(|d| **d > 0.0).count(), 1);
        assert!(sqrt_amplitude_matches(&r, 3, 1.0));
        assert!(!sqrt_amplitude_matches(&t, 3, 1.0));
    }
}
