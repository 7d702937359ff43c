//! Composing low-degree optimal approximants gives high-degree ones.

use num_complex::Complex64;
use zolotarev::composition::{circle_samples, compose_f, compose_r, compose_s, max_residual, CompositionPlan};
use zolotarev::elliptic::EllipticModulus;

fn main() -> zolotarev::Result<()> {
    let theta = std::f64::consts::FRAC_PI_2 - 0.01;
    let plan = CompositionPlan::new(3, 3, theta)?;
    println!("s_3 o s_3 -> s_{}: theta~ = {:.6}", plan.target_degree, plan.theta_tilde);

    let samples = circle_samples(200);
    let res = max_residual(&samples, |z| compose_s(3, 3, theta, z))?;
    println!("sign composition residual {res:.2e}");

    let res = max_residual(&samples, |z| compose_r(1, 2, 1.0, z))?;
    println!("sqrt composition (1, 2) residual {res:.2e}");

    let (l, r) = compose_f(2, 3, &EllipticModulus::new(0.3)?, 0.6)?;
    println!("real composition at x = 0.6: {l:.16} vs {r:.16}");

    let z = Complex64::from_polar(1.0, 0.25);
    let (l, r) = compose_s(2, 2, 1.0, z)?;
    println!("s_2(s_2(z)) = {l:.12}, s_4(z) = {r:.12}");
    Ok(())
}
