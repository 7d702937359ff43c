use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use zolotarev::analysis::{
    contour_grid, error_bounds, lambda_from_z, lemma_bound, phase_error_from_z, phase_error_sign,
    phase_error_sqrt, z4_report, zolotarev_number, Problem, Target, Window,
};
use zolotarev::approximants::{build_r, build_s, FactorParam, UnimodularRational, Family};
use zolotarev::elliptic::solve_lambda;
use zolotarev::oracle::precise::{sign_bound_check, sign_coefficients, sqrt_bound_check, sqrt_coefficients};

const THETAS: [f64; 4] = [0.5, 1.0, 1.4, FRAC_PI_2 - 0.1];

#[test]
fn sign_error_equals_arccos_lambda() {
    for &theta in &THETAS {
        for m in 0..=8 {
            let s = build_s(m, theta).unwrap();
            let rep = phase_error_sign(&s, theta, 64 * (m + 1)).unwrap();
            let want = solve_lambda(theta.cos(), m).unwrap().arccos_lambda();
            assert!((rep.max_error - want).abs() <= 1e-9, "m={m} theta={theta}: {} vs {want}", rep.max_error);
            assert!((rep.predicted - want).abs() <= 1e-15);
            for arc in &rep.arcs {
                assert_eq!(arc.alternations, m + 1, "m={m} theta={theta}");
                assert!(arc.endpoints_attained || m == 0);
            }
            let rep_recip = phase_error_sign(&s.reciprocal(), theta, 64 * (m + 1)).unwrap();
            assert!((rep_recip.max_error - rep.max_error).abs() < 1e-12);
        }
    }
}

#[test]
fn sqrt_error_equals_arccos_lambda() {
    for &theta in &THETAS {
        for n in 0..=4 {
            let r = build_r(n, theta).unwrap();
            let rep = phase_error_sqrt(&r, theta, 128 * (n + 1)).unwrap();
            let want = solve_lambda(theta.cos(), 2 * n + 1).unwrap().arccos_lambda();
            assert!((rep.max_error - want).abs() <= 1e-9, "n={n} theta={theta}");
            assert_eq!(rep.arcs[0].alternations, 2 * n + 2, "n={n} theta={theta}");
            assert!(rep.arcs[0].endpoints_attained);
            // stable under grid doubling
            let rep2 = phase_error_sqrt(&r, theta, 256 * (n + 1)).unwrap();
            assert_eq!(rep2.arcs[0].alternations, 2 * n + 2);
        }
    }
}

#[test]
fn z5_at_three_matches_lambda_seven() {
    let r = build_r(3, 1.2).unwrap();
    let rep = phase_error_sqrt(&r, 1.2, 512).unwrap();
    let want = solve_lambda(1.2_f64.cos(), 7).unwrap().arccos_lambda();
    assert!((rep.max_error - want).abs() < 1e-9);
}

#[test]
fn s1_extrema_at_arc_ends() {
    let s = build_s(1, 0.8).unwrap();
    let rep = phase_error_sign(&s, 0.8, 64).unwrap();
    assert!((rep.max_error - 0.8).abs() < 1e-15);
    let ts: Vec<f64> = rep.arcs[..1].iter().flat_map(|a| [a.lo, a.hi]).collect();
    assert_eq!(ts, vec![-0.8, 0.8]);
    assert!((rep.extrema[0].theta + 0.8).abs() < 1e-15);
}

#[test]
fn tampered_coefficient_breaks_amplitude() {
    let theta = 1.0;
    let r = build_r(3, theta).unwrap();
    let mut params: Vec<f64> = r.factors().iter().map(|p| p.finite().unwrap()).collect();
    params[1] += 1e-6;
    let bad = UnimodularRational::new(0, 0, params.into_iter().map(FactorParam::Finite).collect(), Family::R);
    let want = solve_lambda(theta.cos(), 7).unwrap().arccos_lambda();
    if let Ok(rep) = phase_error_sqrt(&bad, theta, 512) { assert!((rep.max_error - want).abs() > 1e-9) }
}

#[test]
fn zolotarev_chain_and_bounds() {
    for &theta in &THETAS {
        let modulus = zolotarev::approximants::modulus_for_theta(theta).unwrap();
        assert_eq!(zolotarev_number(0, theta).unwrap(), 1.0);
        for m in 1..=10 {
            let z = zolotarev_number(m, theta).unwrap();
            assert!(z <= 4.0 * (-2.0 * m as f64 * modulus.log_rho()).exp());
            let d = solve_lambda(theta.cos(), m).unwrap();
            if z > 0.0 {
                let lam = lambda_from_z(z).unwrap();
                assert!((lam - d.lambda()).abs() <= 1e-10, "m={m}");
                let lhs = (1.0 - d.lambda()) / (1.0 + d.lambda());
                assert!((lhs - 2.0 * z.sqrt() / (1.0 + z)).abs() <= 1e-10);
            }
            assert!((phase_error_from_z(z).unwrap() - d.arccos_lambda()).abs() <= 1e-10, "m={m} theta={theta}");
        }
    }
    assert_eq!(lambda_from_z(0.0).unwrap(), 1.0);
    assert!(lambda_from_z(1.0).is_err());
    let mut prev = 2.0;
    for i in 0..100 {
        let l = lambda_from_z(i as f64 / 100.0).unwrap();
        assert!(l < prev);
        prev = l;
    }
}

#[test]
fn measured_error_below_bounds() {
    for &theta in &THETAS {
        for m in 1..=8 {
            let s = build_s(m, theta).unwrap();
            let rep = phase_error_sign(&s, theta, 64 * (m + 1)).unwrap();
            let seeds: Vec<f64> = rep.extrema.iter().map(|e| e.theta).collect();
            let check = sign_bound_check(m, theta, &seeds).unwrap();
            assert!(check.holds(), "m={m} theta={theta}: {check:?}");
            assert!((check.measured - rep.max_error).abs() < 1e-12);
            let (b1, b2) = error_bounds(m, theta, Problem::Z6).unwrap();
            assert!((check.bound_rho - b1).abs() <= 1e-13 * b1);
            assert!((check.bound_secant - b2).abs() <= 1e-13 * b2);
        }
        for n in 0..=4 {
            let r = build_r(n, theta).unwrap();
            let rep = phase_error_sqrt(&r, theta, 128 * (n + 1)).unwrap();
            let seeds: Vec<f64> = rep.extrema.iter().map(|e| e.theta).collect();
            let check = sqrt_bound_check(n, theta, &seeds).unwrap();
            assert!(check.holds(), "n={n} theta={theta}: {check:?}");
            assert!((check.measured - rep.max_error).abs() < 1e-12);
        }
    }
    for i in 0..=1000 {
        let (l, r) = lemma_bound(i as f64 / 1000.0).unwrap();
        assert!(l <= r + 1e-15);
    }
}

#[test]
fn precise_coefficients_match_double_precision() {
    for &theta in &THETAS {
        for m in 1..=8 {
            let s = build_s(m, theta).unwrap();
            for (p, q) in s.factors().iter().zip(sign_coefficients(m, theta).unwrap()) {
                match (p, q) {
                    (FactorParam::Infinite, None) => {}
                    (FactorParam::Finite(b), Some(c)) => assert!((b - c).abs() <= 1e-12 * c.abs().max(1.0), "m={m}"),
                    other => panic!("mismatch {other:?}"),
                }
            }
        }
        for n in 1..=4 {
            let r = build_r(n, theta).unwrap();
            for (p, a) in r.factors().iter().zip(sqrt_coefficients(n, theta).unwrap()) {
                let b = p.finite().unwrap();
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }
    }
}

#[test]
fn z4_deviation_and_count() {
    for m in 1..=6 {
        let rep = z4_report(m, 0.3, 4096).unwrap();
        assert!((rep.max_deviation - rep.predicted).abs() < 1e-12);
        assert_eq!(rep.extrema.len(), m + 1);
        let z = zolotarev_number(m, 0.3_f64.acos()).unwrap();
        assert!((rep.predicted - 2.0 * z.sqrt() / (1.0 + z)).abs() < 1e-12);
    }
}

#[test]
fn contour_poles_and_zero_at_one() {
    let theta = FRAC_PI_2 - 0.15;
    let n = 11;
    let r = build_r(n, theta).unwrap();
    let res = 401;
    let g = contour_grid(&r, Target::Sqrt, Window::new((-2.0, 2.0), (-2.0, 2.0)).unwrap(), res).unwrap();
    // z = 1 is the grid node (300, 200)
    assert!(g.at(300, 200) < 1e-14);
    let (hr, _) = g.spacing();
    for p in r.factors() {
        let a = p.finite().unwrap();
        if a < 2.0 {
            let i = ((-a + 2.0) / hr).round() as usize;
            assert!(g.at(i, 200).is_infinite(), "pole {a}");
        }
    }
    for (i, j) in g.pole_cells() {
        let (x, y) = (g.re_at(i), g.im_at(j));
        assert!(r.factors().iter().any(|p| (x + p.finite().unwrap()).abs() <= 0.5 * hr + 1e-15 && y.abs() <= 0.5 * hr + 1e-15));
    }
}

#[test]
fn contour_minima_lie_on_circle() {
    let theta = FRAC_PI_2 - 0.15;
    for (r, target) in [
        (build_r(11, theta).unwrap(), Target::Sqrt),
        (build_s(17, theta).unwrap(), Target::Sign),
    ] {
        let res = 801;
        let g = contour_grid(&r, target, Window::new((-1.5, 1.5), (-1.5, 1.5)).unwrap(), res).unwrap();
        let (h, _) = g.spacing();
        let mut on_circle = 0;
        for (i, j) in g.local_minima(0.05) {
            let z = Complex64::new(g.re_at(i), g.im_at(j));
            // skip the branch cut of sqrt and the sign discontinuity
            if (target == Target::Sqrt && z.re < 0.0 && z.im.abs() < 2.0 * h)
                || (target == Target::Sign && z.re.abs() < 2.0 * h)
            {
                continue;
            }
            assert!((z.norm() - 1.0).abs() <= 2.0 * h, "minimum off the circle at {z}");
            on_circle += 1;
        }
        assert!(on_circle > 0);
    }
}

#[test]
fn bounds_hold_at_high_degree() {
    for &theta in &[0.1, 0.5, 1.0, FRAC_PI_2 - 0.1] {
        for &m in &[0, 1, 2, 16, 33, 64] {
            let check = sign_bound_check(m, theta, &[]).unwrap();
            assert!(check.holds(), "m={m} theta={theta}: {check:?}");
            let want = solve_lambda(theta.cos(), m).unwrap().arccos_lambda();
            assert!((check.measured - want).abs() <= 1e-12 * want.max(1e-300) + 1e-15, "m={m} theta={theta}");
        }
        for &n in &[0, 7, 31] {
            let check = sqrt_bound_check(n, theta, &[]).unwrap();
            assert!(check.holds(), "n={n} theta={theta}: {check:?}");
        }
    }
}
