//! Complete integrals, Jacobi functions, the Grötzsch ring function and the
//! degree equation.

use zolotarev::elliptic::{complete_k, groetzsch_mu, inverse_sn, jacobi_sncndn, mu_inverse, solve_lambda};

fn main() -> zolotarev::Result<()> {
    let ell = 0.5;
    let k = complete_k(ell)?;
    println!("K({ell}) = {k:.16}");

    let u = 0.7;
    let (sn, cn, dn) = jacobi_sncndn(u, ell)?;
    println!("sn, cn, dn at u = {u}: {sn:.16} {cn:.16} {dn:.16}");
    println!("sn^-1(sn(u)) = {:.16}", inverse_sn(sn, ell)?);

    let mu = groetzsch_mu(ell)?;
    println!("mu({ell}) = {mu:.16}, mu^-1(mu) = {:.16}", mu_inverse(mu)?);

    for m in [1, 2, 4, 8] {
        let red = solve_lambda(ell, m)?;
        println!("m = {m}: lambda = {:.16}, arccos(lambda) = {:.3e}", red.lambda(), red.arccos_lambda());
    }
    Ok(())
}
