//! The best unimodular approximant to sqrt(z) on one arc, and its relation
//! to the odd-degree sign approximant.

use num_complex::Complex64;
use zolotarev::analysis::phase_error_sqrt;
use zolotarev::approximants::{build_r, build_s};

fn main() -> zolotarev::Result<()> {
    let (n, theta) = (3, 1.2);
    let r = build_r(n, theta)?;
    let a: Vec<f64> = r.factors().iter().filter_map(|p| p.finite()).collect();
    println!("r_{n} coefficients a_j = {a:?}");

    let rep = phase_error_sqrt(&r, theta, 128 * (n + 1))?;
    println!("max phase error {:.6e} vs arccos(lambda) {:.6e}", rep.max_error, rep.predicted);
    println!("alternations {} (expected {})", rep.arcs[0].alternations, rep.arcs[0].expected);

    // s_{2n+1}(z)^{(-1)^n} r_n(z^2) = z
    let s = build_s(2 * n + 1, theta)?;
    let s = if n % 2 == 1 { s.reciprocal() } else { s };
    let z = Complex64::from_polar(1.0, 0.3);
    println!("|s r - z| = {:.2e}", (s.eval(z)? * r.eval(z * z)? - z).norm());
    Ok(())
}
