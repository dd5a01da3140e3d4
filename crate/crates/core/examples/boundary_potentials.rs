// Layer potentials on a hexagon and the discrete representation formula.
//
// A field radiating from a point outside the hexagon solves the damped
// equation inside, so its boundary values and outward differences alone
// reproduce it at every interior point.

use std::error::Error;

use num_complex::Complex64;
use trihelm::green::{EngineConfig, GreenEngine};
use trihelm::lattice::{enumerate_boundary, hexagon_window, LatticePoint, Region};
use trihelm::potentials::{
    double_layer, green_representation, green_second_identity_check, single_layer, BoundaryTrace,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let engine = GreenEngine::build(EngineConfig::new(1.3).n_max(30))?;
    let region = hexagon_window(4);
    let enumeration = enumerate_boundary(&region)?;
    println!("hexagon of radius 4: {} boundary points", enumeration.len());

    let z = LatticePoint::new(7, -2);
    let u = |x: LatticePoint| engine.green(x - z).expect("in range");
    let trace = BoundaryTrace::of(u, &enumeration);

    let Region::Finite { interior, .. } = &region else {
        return Err("expected a finite region".into());
    };
    let mut worst = 0.0f64;
    for x in interior {
        let r = green_representation(&engine, &enumeration, &trace, *x)?;
        worst = worst.max((r - u(*x)).norm());
    }
    println!("max reconstruction error over {} interior points: {worst:.2e}", interior.len());

    let v = |x: LatticePoint| Complex64::new((0.3 * x.x1 as f64).cos(), 0.1 * x.x2 as f64);
    let identity = green_second_identity_check(u, v, &region)?;
    println!("second identity defect: {identity:.2e}");

    let ones = vec![Complex64::new(1.0, 0.0); enumeration.len()];
    let origin = LatticePoint::ORIGIN;
    println!("V1(0) = {:.10}", single_layer(&engine, &enumeration, &ones, origin)?);
    println!("W1(0) = {:.10}", double_layer(&engine, &enumeration, &ones, origin)?);

    if worst > 1e-9 || identity > 1e-12 {
        return Err("representation check failed".into());
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
