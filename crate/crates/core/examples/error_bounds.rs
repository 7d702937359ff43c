//! Measured optimal errors against the two a-priori bounds, decided in
//! extended precision.

use zolotarev::oracle::precise::{sign_bound_check, sqrt_bound_check};

fn main() -> zolotarev::Result<()> {
    let theta = 1.0;
    println!("degree  measured                 4 rho^(-m/2)             secant bound             bits");
    for m in [1, 2, 4, 8, 16, 32] {
        let c = sign_bound_check(m, theta, &[])?;
        println!(
            "{m:>6}  {:.16e}  {:.16e}  {:.16e}  {}  holds={}",
            c.measured, c.bound_rho, c.bound_secant, c.precision, c.holds()
        );
    }
    let c = sqrt_bound_check(10, theta, &[])?;
    println!("sqrt n=10: ln measured {:.6}, ln bound {:.6}, holds={}", c.ln_measured, c.ln_bound_rho, c.holds());
    Ok(())
}
