//! Zolotarev's best rational approximation to sign(x) on [-1, -l] U [l, 1].

use zolotarev::analysis::{deviation_from_z, z4_report, zolotarev_number};
use zolotarev::approximants::z4_solution;

fn main() -> zolotarev::Result<()> {
    let (m, ell) = (4, 0.1);
    let sol = z4_solution(m, ell)?;
    println!("lambda = {:.16}, deviation (1 - lambda)/(1 + lambda) = {:.6e}", sol.fraction().lambda(), sol.deviation());
    for x in [0.1, 0.2, 0.5, 1.0] {
        println!("  approximant at {x}: {:.12}", sol.eval(x)?);
    }
    let rep = z4_report(m, ell, 4096)?;
    println!("measured {:.6e} at {} alternation points", rep.max_deviation, rep.extrema.len());
    let z = zolotarev_number(m, ell.acos())?;
    println!("Zolotarev number {z:.6e}, 2 sqrt(Z)/(1 + Z) = {:.6e}", deviation_from_z(z));
    Ok(())
}
