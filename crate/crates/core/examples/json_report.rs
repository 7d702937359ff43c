//! Deterministic JSON with round-trip floats and string sentinels.

use serde::Serialize;
use zolotarev::approximants::build_s;
use zolotarev::report::{to_json, Point, Real, ReportEnvelope};

#[derive(Serialize)]
struct Inputs {
    degree: usize,
    theta: Real,
}

#[derive(Serialize)]
struct Results {
    poles: Vec<Point>,
    params: Vec<Real>,
}

fn main() -> zolotarev::Result<()> {
    let s = build_s(2, 1.0)?;
    let results = Results {
        poles: s.poles().into_iter().map(Point::from).collect(),
        params: s.factors().iter().map(|p| Real(p.finite().unwrap_or(f64::INFINITY))).collect(),
    };
    let inputs = Inputs { degree: 2, theta: Real(1.0) };
    print!("{}", to_json(&ReportEnvelope::new("example", inputs, results)));
    Ok(())
}
