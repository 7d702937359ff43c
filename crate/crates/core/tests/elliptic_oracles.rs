use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use proptest::prelude::*;
use zolotarev::elliptic::{
    complete_k, groetzsch_mu, inverse_sn, jacobi_sncndn, mu_inverse, solve_lambda, EllipticModulus,
    Jacobi,
};
use zolotarev::oracle::{
    integrate_amplitude, oracle_incomplete_f, oracle_k, oracle_mu_inverse, oracle_sn,
};

fn ell_grid() -> Vec<f64> {
    (1..=19).map(|i| 0.05 * i as f64).collect()
}

#[test]
fn k_half_matches_quadrature() {
    let q = oracle_k(0.5).unwrap().value;
    // frozen from the quadrature oracle
    assert!((q - 1.685_750_354_812_596).abs() < 1e-12, "{q}");
    let agm = complete_k(0.5).unwrap();
    assert!(((agm - q) / q).abs() < 1e-14);
}

#[test]
fn agm_k_agrees_with_quadrature_on_grid() {
    let mut grid = ell_grid();
    grid.extend([0.0, 0.99, 0.999, 0.999_99]);
    for ell in grid {
        let q = oracle_k(ell).unwrap().value;
        let a = complete_k(ell).unwrap();
        assert!((a - q).abs() <= 1e-11, "ell={ell}: {a} vs {q}");
    }
}

#[test]
fn landen_agrees_with_amplitude_ode() {
    for ell in [0.05, 0.3, 0.5, 0.8, 0.95] {
        let j = Jacobi::new(ell).unwrap();
        let k = j.quarter_period();
        for i in -8..=8 {
            let u = 2.0 * k * i as f64 / 8.0;
            let o = integrate_amplitude(u, ell, 1e-15).unwrap();
            let (sn, cn, dn) = j.sncndn(u);
            assert!((sn - o.sn).abs() <= 1e-11, "sn ell={ell} u={u}");
            assert!((cn - o.cn).abs() <= 1e-11, "cn ell={ell} u={u}");
            assert!((dn - o.dn).abs() <= 1e-11, "dn ell={ell} u={u}");
        }
    }
}

#[test]
fn sncndn_example_point() {
    let (sn, cn, dn) = jacobi_sncndn(0.7, 0.5).unwrap();
    assert!((0.25 * sn * sn + dn * dn - 1.0).abs() < 1e-13);
    assert!((sn * sn + cn * cn - 1.0).abs() < 1e-13);
    let o = oracle_sn(0.7, 0.5).unwrap().value;
    assert!((sn - o).abs() < 1e-12);
}

#[test]
fn pythagorean_identities_on_dense_grid() {
    for ell in ell_grid() {
        let j = Jacobi::new(ell).unwrap();
        let k = j.quarter_period();
        for i in 0..=400 {
            let u = -2.0 * k + 4.0 * k * i as f64 / 400.0;
            let (sn, cn, dn) = j.sncndn(u);
            assert!((sn * sn + cn * cn - 1.0).abs() <= 1e-13);
            assert!((ell * ell * sn * sn + dn * dn - 1.0).abs() <= 1e-13);
        }
    }
}

#[test]
fn half_period_identity() {
    for ell in ell_grid() {
        let j = Jacobi::new(ell).unwrap();
        let k = j.quarter_period();
        for i in 0..50 {
            let u = -3.0 + 0.13 * i as f64;
            let a = j.sncndn(u).0;
            let b = j.sncndn(u + 2.0 * k).0;
            assert!((a + b).abs() <= 1e-12, "ell={ell} u={u}");
        }
    }
}

#[test]
fn inverse_sn_matches_incomplete_integral() {
    let u = inverse_sn(0.3, 0.6).unwrap();
    let o = oracle_incomplete_f(0.3_f64.asin(), 0.6).unwrap().value;
    assert!((u - o).abs() < 1e-12);
    let (sn, _, _) = jacobi_sncndn(u, 0.6).unwrap();
    assert!((sn - 0.3).abs() < 1e-12);
}

#[test]
fn inverse_sn_round_trip() {
    for ell in ell_grid() {
        let j = Jacobi::new(ell).unwrap();
        for i in 0..=40 {
            let x = -1.0 + i as f64 / 20.0;
            let u = j.inverse_sn(x).unwrap();
            assert!(u.abs() <= j.quarter_period() * (1.0 + 1e-15));
            assert!((j.sncndn(u).0 - x).abs() <= 1e-12, "ell={ell} x={x}");
        }
    }
}

#[test]
fn groetzsch_half_from_two_quadratures() {
    let mu = groetzsch_mu(0.5).unwrap();
    let kc = 0.75_f64.sqrt();
    let expected = FRAC_PI_2 * oracle_k(kc).unwrap().value / oracle_k(0.5).unwrap().value;
    assert!((mu - expected).abs() < 1e-12);
}

#[test]
fn groetzsch_functional_identity() {
    for ell in ell_grid() {
        let m = EllipticModulus::new(ell).unwrap();
        let prod = m.mu() * m.complement().mu();
        assert!((prod - FRAC_PI_2 * FRAC_PI_2).abs() < 1e-12);
    }
    assert!((groetzsch_mu(FRAC_1_SQRT_2).unwrap() - FRAC_PI_2).abs() < 1e-15);
}

#[test]
fn mu_inverse_matches_bisection_oracle() {
    let l = mu_inverse(3.0).unwrap();
    let o = oracle_mu_inverse(3.0).unwrap();
    assert!((l - o).abs() < 1e-12, "{l} vs {o}");
    assert!((groetzsch_mu(l).unwrap() - 3.0).abs() < 1e-13);
}

#[test]
fn mu_inverse_round_trip_range() {
    // bare-ell round trip while ell' is still recoverable from ell
    for i in 0..200 {
        let v = 0.8 + 0.1 * i as f64;
        let l = mu_inverse(v).unwrap();
        assert!((groetzsch_mu(l).unwrap() - v).abs() <= 1e-13, "v={v}");
    }
    // pair round trip all the way down
    for i in 1..80 {
        let v = 0.01 * i as f64;
        let (l, lc) = zolotarev::elliptic::mu_inverse_pair(v).unwrap();
        let m = EllipticModulus::from_pair(l, lc).unwrap();
        assert!((m.mu() - v).abs() <= 1e-13, "v={v}");
    }
}

#[test]
fn degree_two_residual_against_quadrature() {
    let d = solve_lambda(0.5, 2).unwrap();
    let lam = d.lambda();
    let lhs = oracle_k(0.5).unwrap().value / oracle_k(0.75_f64.sqrt()).unwrap().value;
    let rhs = oracle_k(lam).unwrap().value / (2.0 * oracle_k(d.lambda_comp()).unwrap().value);
    assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
}

#[test]
fn lambda_increases_with_degree() {
    for ell in [0.1, 0.5, 0.9] {
        let mut prev = -1.0;
        let mut prev_comp = 2.0;
        for m in 0..12 {
            let d = solve_lambda(ell, m).unwrap();
            // lambda saturates at 1 in f64 long before lambda' stops shrinking
            assert!(d.lambda() >= prev && (d.lambda() > prev || prev == 1.0));
            assert!(d.lambda_comp() < prev_comp, "ell={ell} m={m}");
            prev = d.lambda();
            prev_comp = d.lambda_comp();
        }
    }
}

#[test]
fn modulus_monotonicity_pairwise() {
    let ms: Vec<_> = ell_grid()
        .into_iter()
        .map(|l| EllipticModulus::new(l).unwrap())
        .collect();
    for w in ms.windows(2) {
        assert!(w[1].quarter_period() > w[0].quarter_period());
        assert!(w[1].quarter_period_comp() < w[0].quarter_period_comp());
    }
    for m in &ms {
        assert!((m.ell().powi(2) + m.ell_comp().powi(2) - 1.0).abs() < 4.0 * f64::EPSILON);
        assert!((m.mu() - FRAC_PI_2 * m.quarter_period_comp() / m.quarter_period()).abs() < 1e-15);
        assert!(m.rho() > 1.0);
    }
}

proptest! {
    #[test]
    fn modulus_chain_consistency(ell in 0.02f64..0.98, m in 1usize..6, mt in 1usize..6) {
        let direct = solve_lambda(ell, m * mt).unwrap();
        let inner = solve_lambda(ell, m).unwrap();
        let outer = EllipticModulus::from_pair(inner.lambda(), inner.lambda_comp()).unwrap();
        let chained = zolotarev::elliptic::DegreeReduction::new(&outer, mt).unwrap();
        prop_assert!((direct.lambda() - chained.lambda()).abs() <= 1e-11);
        prop_assert!((direct.lambda_comp() - chained.lambda_comp()).abs() <= 1e-11 * direct.lambda_comp().max(1e-3));
    }

    #[test]
    fn sn_odd_and_bounded(u in -20.0f64..20.0, ell in 0.0f64..0.999) {
        let (sn, cn, dn) = jacobi_sncndn(u, ell).unwrap();
        let (sn2, cn2, dn2) = jacobi_sncndn(-u, ell).unwrap();
        prop_assert!((sn + sn2).abs() < 1e-14);
        prop_assert!((cn - cn2).abs() < 1e-14);
        prop_assert!((dn - dn2).abs() < 1e-14);
        prop_assert!(sn.abs() <= 1.0 && dn > 0.0);
    }
}

#[test]
fn near_unit_modulus_keeps_relative_accuracy() {
    let kc: f64 = 1e-7;
    let j = Jacobi::from_pair(((1.0 - kc) * (1.0 + kc)).sqrt(), kc).unwrap();
    for i in 0..=60 {
        let u = 0.25 * i as f64;
        let (sn, cn, dn) = j.sncndn(u);
        let sech = 1.0 / u.cosh();
        assert!((sn - u.tanh()).abs() < 1e-12, "u={u}");
        // corrections are O(kc^2 cosh^2 u) relative
        let tol = 1e-12 + kc * kc * u.cosh().powi(2);
        assert!(((cn - sech) / sech).abs() < tol, "u={u}");
        assert!(((dn - sech) / sech).abs() < tol, "u={u}");
    }
}
