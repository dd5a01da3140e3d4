// Lattice Green's function: the shell recursion against a quadrature oracle.
//
// Run with `cargo run --example green_function`.

use std::error::Error;

use trihelm::green::{contour_oracle, helmholtz_residual, EngineConfig, GreenEngine};
use trihelm::lattice::LatticePoint;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let k = 2f64.sqrt();
    // moderate damping keeps the quadrature cheap
    let engine = GreenEngine::build(EngineConfig::new(k).eps(1e-3).n_max(80))?;
    println!("k = {k:.6}, eps = {:.1e}, n_max = {}", engine.config().eps, engine.n_max());
    println!("G(0,0) = {:.12}", engine.g00());

    let mut worst = 0.0f64;
    for (x1, x2) in [(0, 0), (1, 0), (2, -1), (3, 1), (-4, 2)] {
        let x = LatticePoint::new(x1, x2);
        let g = engine.green(x)?;
        let q = contour_oracle(x, k, engine.config().eps, 1e-11)?;
        let d = (g - q).norm();
        worst = worst.max(d);
        println!("G{x:>9} = {g:>38.12}   |recursion - quadrature| = {d:.2e}");
    }

    let residual = helmholtz_residual(&engine, 20)?;
    println!("max |(Δ + λ)G - δ| on the hexagon of radius 20: {residual:.2e}");

    if worst > 1e-6 || residual > 1e-10 {
        return Err(format!("disagreement {worst:.2e}, residual {residual:.2e}").into());
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
