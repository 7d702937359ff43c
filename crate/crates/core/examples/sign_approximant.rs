//! The best unimodular approximant to sign(z) on two arcs and its
//! equioscillating phase error.

use num_complex::Complex64;
use zolotarev::analysis::phase_error_sign;
use zolotarev::approximants::build_s;

fn main() -> zolotarev::Result<()> {
    let (m, theta) = (5, 1.2);
    let s = build_s(m, theta)?;
    println!("s_{m}: z^{} i^{} with {} factors", s.z_power(), s.quarter_turns(), s.factors().len());
    println!("exact type {:?}", s.exact_type());
    for p in s.factors() {
        println!("  b = {p:?}");
    }

    let z = Complex64::from_polar(1.0, 0.4);
    let w = s.eval(z)?;
    println!("s(e^0.4 i) = {w:.6}, |s| = {:.16}", w.norm());

    let rep = phase_error_sign(&s, theta, 64 * (m + 1))?;
    println!("max phase error {:.16e}, predicted {:.16e}", rep.max_error, rep.predicted);
    for arc in &rep.arcs {
        println!("  arc [{:.3}, {:.3}]: {} alternations", arc.lo, arc.hi, arc.alternations);
    }
    Ok(())
}
