//! Independent checks: quadrature, the amplitude ODE, and a brute-force
//! degree-1 minimax search.

use zolotarev::approximants::coeff_a;
use zolotarev::elliptic::{complete_k, jacobi_sncndn};
use zolotarev::oracle::{integrate_amplitude, oracle_k, oracle_minimax_degree1};

fn main() -> zolotarev::Result<()> {
    let ell = 0.8;
    let q = oracle_k(ell)?;
    println!("K: AGM {:.16}, quadrature {:.16} ({} evaluations)", complete_k(ell)?, q.value, q.evaluations);

    let u = 1.1;
    let o = integrate_amplitude(u, ell, 1e-15)?;
    let (sn, _, _) = jacobi_sncndn(u, ell)?;
    println!("sn: Landen {sn:.16}, ODE {:.16}", o.sn);

    let theta = 0.7;
    let scan = oracle_minimax_degree1(theta, 100_000)?;
    println!("degree 1: search a = {:.10}, closed form a_1 = {:.10}", scan.refined_argmin, coeff_a(1, 1, theta)?);
    Ok(())
}
