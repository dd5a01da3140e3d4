// Whole-plane problem with data on a hexagonal ring.
//
// The field of a point source placed on the ring solves the equation off
// the ring, so its boundary values must give it back everywhere.

use std::error::Error;

use num_complex::Complex64;
use trihelm::lattice::{hexagon_window, LatticePoint};
use trihelm::solver::{BoundaryData, Geometry, Problem, ProblemSpec, Window};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let ring = hexagon_window(2).boundary().clone();
    let geometry = Geometry::CaseOne { boundary: ring.clone() };
    let spec = ProblemSpec::new(
        geometry,
        2f64.sqrt(),
        BoundaryData::Constant(Complex64::new(0.0, 0.0)),
        Window::square(-6, 6),
    );
    let base = Problem::prepare(spec)?;

    let z = LatticePoint::new(2, -1);
    let g = base.engine().clone();
    let mut values = std::collections::BTreeMap::new();
    for y in &ring {
        values.insert(*y, g.green(*y - z)?);
    }
    let problem = base.with_data(BoundaryData::Values(values))?;
    let solution = problem.solve()?;
    println!(
        "{} boundary points, condition {:.3e}, relative residual {:.1e}",
        problem.enumeration().len(),
        solution.condition,
        solution.relative_residual
    );

    let grid = problem.evaluate_field(&solution.phi, &problem.spec().window)?;
    let mut worst = 0.0f64;
    for (x, u) in grid.values() {
        worst = worst.max((u - g.green(x - z)?).norm());
    }
    println!("max |u - G(. - z)| over the window: {worst:.2e}");
    if worst > 1e-10 {
        return Err(format!("field mismatch {worst:.2e}").into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
