//! Finite Blaschke products with the same extremal property, and their
//! links to the sign approximants.

use num_complex::Complex64;
use zolotarev::connections::{
    blaschke_h, blaschke_outer_modulus, blaschke_outer_modulus_via_f, blaschke_s_relation, compose_h,
};

fn main() -> zolotarev::Result<()> {
    let (m, ell) = (3, 0.25);
    let h = blaschke_h(m, ell)?;
    println!("h_{m} parameters {:?}", h.params);
    let z = Complex64::from_polar(1.0, 0.9);
    println!("|h(z)| on the circle = {:.16}", h.eval(z)?.norm());

    println!(
        "outer modulus: {:.16} (Zolotarev number) vs {:.16} (F_m)",
        blaschke_outer_modulus(m, ell)?,
        blaschke_outer_modulus_via_f(m, ell)?
    );
    let (l, r) = compose_h(2, 3, ell, z)?;
    println!("h composition residual {:.2e}", (l - r).norm());

    let (l, r) = blaschke_s_relation(m, ell, 1.3)?;
    println!("s relation at z = 1.3: {l:.16} vs {r:.16}");
    Ok(())
}
