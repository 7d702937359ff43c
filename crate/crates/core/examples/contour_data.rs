//! Error magnitudes on a grid of the complex plane, written as CSV.

use std::f64::consts::FRAC_PI_2;

use zolotarev::analysis::{contour_grid, Target, Window};
use zolotarev::approximants::build_r;
use zolotarev::report::write_grid_csv;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let theta = FRAC_PI_2 - 0.15;
    let r = build_r(11, theta)?;
    let field = contour_grid(&r, Target::Sqrt, Window::new((-2.0, 2.0), (-2.0, 2.0))?, 201)?;
    println!("{} pole cells", field.pole_cells().len());
    let path = std::env::temp_dir().join("zolotarev_r11.csv");
    write_grid_csv(std::fs::File::create(&path)?, &field)?;
    println!("wrote {}", path.display());
    Ok(())
}
