//! Acceptance sweep: one line per criterion, nonzero exit if any fails.

use std::f64::consts::FRAC_PI_2;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use zolotarev::approximants::{build_r, build_s, UnimodularRational};
use zolotarev::selftest;

const BIN: &str = env!("CARGO_BIN_EXE_zolotarev");
const FIGURE_THETA: f64 = FRAC_PI_2 - 0.15;
const SELFTEST_BUDGET: Duration = Duration::from_secs(60);

struct Grid {
    res: usize,
    re: Vec<f64>,
    im: Vec<f64>,
    val: Vec<f64>,
}

impl Grid {
    fn parse(text: &str) -> Result<Self, String> {
        let mut lines = text.split('\n');
        if lines.next() != Some("re,im,value") {
            return Err("missing header".into());
        }
        let (mut re, mut im, mut val) = (Vec::new(), Vec::new(), Vec::new());
        for line in lines.filter(|l| !l.is_empty()) {
            let cells: Vec<f64> = line
                .split(',')
                .map(|c| c.parse::<f64>().map_err(|e| format!("{c}: {e}")))
                .collect::<Result<_, _>>()?;
            if cells.len() != 3 {
                return Err(format!("bad row {line}"));
            }
            re.push(cells[0]);
            im.push(cells[1]);
            val.push(cells[2]);
        }
        let res = (val.len() as f64).sqrt().round() as usize;
        if res * res != val.len() {
            return Err(format!("{} values do not form a square grid", val.len()));
        }
        Ok(Self { res, re, im, val })
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.val[j * self.res + i]
    }

    fn point(&self, i: usize, j: usize) -> Complex64 {
        let k = j * self.res + i;
        Complex64::new(self.re[k], self.im[k])
    }

    fn spacing(&self) -> f64 {
        self.re[1] - self.re[0]
    }
}

/// Run the contour command and check zeros on the circle and pole cells.
fn contour_check(problem: &str, degree: usize, r: &UnimodularRational) -> Result<String, String> {
    let args = [
        "contour",
        "--problem",
        problem,
        "--degree",
        &degree.to_string(),
        "--theta",
        &FIGURE_THETA.to_string(),
        "--window=-2,2,-2,2",
        "--resolution",
        "401",
    ];
    let run = || Command::new(BIN).args(args).output().map_err(|e| e.to_string());
    let out = run()?;
    if !out.status.success() {
        return Err(format!("exit {:?}", out.status.code()));
    }
    if run()?.stdout != out.stdout {
        return Err("two runs differ".into());
    }
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    if text.contains('\r') {
        return Err("CRLF line ending".into());
    }
    let g = Grid::parse(&text)?;
    let h = g.spacing();

    // every pole inside the window owns an inf cell, and every inf cell is a pole
    let poles: Vec<Complex64> = r.poles().into_iter().filter(|p| p.re.abs() < 2.0 && p.im.abs() < 2.0).collect();
    for p in &poles {
        let i = ((p.re + 2.0) / h).round() as usize;
        let j = ((p.im + 2.0) / h).round() as usize;
        if !g.at(i, j).is_infinite() {
            return Err(format!("no pole cell at {p}"));
        }
    }
    let mut inf_cells = 0;
    for j in 0..g.res {
        for i in 0..g.res {
            if g.at(i, j).is_infinite() {
                inf_cells += 1;
                let z = g.point(i, j);
                if !poles.iter().any(|p| (p.re - z.re).abs() <= 0.5 * h + 1e-12 && (p.im - z.im).abs() <= 0.5 * h + 1e-12) {
                    return Err(format!("inf cell at {z} is not a pole"));
                }
            }
        }
    }

    // small local minima of the error lie on the unit circle, away from the
    // sqrt branch cut and the sign discontinuity
    let mut on_circle = 0;
    for j in 1..g.res - 1 {
        for i in 1..g.res - 1 {
            let v = g.at(i, j);
            if v.is_nan() || v >= 0.05 {
                continue;
            }
            let is_min = (0..9).all(|k| {
                let (di, dj) = (k % 3, k / 3);
                k == 4 || g.at(i + di - 1, j + dj - 1) >= v
            });
            if !is_min {
                continue;
            }
            let z = g.point(i, j);
            let cut = if problem == "z5" { z.re < 0.0 && z.im.abs() < 2.0 * h } else { z.re.abs() < 2.0 * h };
            if cut {
                continue;
            }
            if (z.norm() - 1.0).abs() > 2.0 * h {
                return Err(format!("error minimum off the circle at {z}"));
            }
            on_circle += 1;
        }
    }
    if on_circle == 0 {
        return Err("no error minima found".into());
    }
    if problem == "z5" {
        // z = 1 is the grid node (300, 200)
        if g.at(300, 200) != 0.0 {
            return Err(format!("value at 1 is {}", g.at(300, 200)));
        }
    }
    Ok(format!(
        "{problem} degree {degree}: {} poles, {inf_cells} pole cells, {on_circle} minima on the circle",
        poles.len()
    ))
}

fn criterion_9() -> (bool, String) {
    let start = Instant::now();
    let out = match Command::new(BIN).arg("selftest").output() {
        Ok(o) => o,
        Err(e) => return (false, format!("cannot run selftest: {e}")),
    };
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let passes = stdout.lines().filter(|l| l.contains("[PASS]")).count();
    let mut notes = vec![format!("selftest exit {:?} with {passes}/8 passing in {:.1} s", out.status.code(), elapsed.as_secs_f64())];
    let mut ok = out.status.success() && passes == 8 && elapsed < SELFTEST_BUDGET;
    let cases = [
        ("z5", 11, build_r(11, FIGURE_THETA)),
        ("z6", 17, build_s(17, FIGURE_THETA)),
    ];
    for (problem, degree, r) in cases {
        let res = r.map_err(|e| e.to_string()).and_then(|r| contour_check(problem, degree, &r));
        match res {
            Ok(s) => notes.push(s),
            Err(e) => {
                ok = false;
                notes.push(format!("{problem} contour: {e}"));
            }
        }
    }
    (ok, notes.join("; "))
}

fn main() {
    let mut failed = Vec::new();
    for outcome in selftest::run_all() {
        println!("{outcome}");
        if !outcome.passed {
            failed.push(outcome.id);
        }
    }
    let start = Instant::now();
    let (ok, detail) = criterion_9();
    println!(
        "criterion 9 [{}] end-to-end selftest and contour grids: {detail} ({:.2} s)",
        if ok { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    if !ok {
        failed.push(9);
    }
    if failed.is_empty() {
        println!("acceptance: all 9 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
