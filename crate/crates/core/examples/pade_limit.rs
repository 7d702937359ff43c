//! As the arc shrinks, r_n tends to the Padé approximant of sqrt(z) at 1.

use zolotarev::connections::{pade_limit_check, pade_p, pade_pole_formula};

fn main() -> zolotarev::Result<()> {
    let n = 3;
    let p = pade_p(n)?;
    println!("p_{n} numerator {:?}", p.numerator);
    println!("p_{n} denominator {:?}", p.denominator);
    println!("poles {:?}", p.poles);
    println!("-tan^2(j pi/(2n+1)) = {:?}", pade_pole_formula(n));

    let thetas = [0.3, 0.1, 0.03, 0.01, 0.003, 0.001];
    let dev = pade_limit_check(n, &thetas)?;
    for (t, d) in thetas.iter().zip(dev) {
        println!("theta = {t:<6} pole-set deviation {d:.3e}");
    }
    Ok(())
}
