// Saddle points of the dispersion relation along observation directions.

use std::error::Error;
use std::f64::consts::PI;

use trihelm::lattice::{Direction, LatticePoint};
use trihelm::radiation::{solve_dispersion, zeta_boundary};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let k = 2f64.sqrt();
    println!("{:>8} {:>12} {:>12} {:>10}", "alpha", "xi1", "xi2", "residual");
    for i in 0..8 {
        let alpha = i as f64 * PI / 4.0;
        let s = solve_dispersion(alpha, k)?;
        println!("{alpha:>8.4} {:>12.8} {:>12.8} {:>10.1e}", s.xi1, s.xi2, s.residual());
        if s.residual() > 1e-12 {
            return Err(format!("residual {:.1e} at alpha = {alpha}", s.residual()).into());
        }
    }

    // boundary impedance seen from a point on side 1
    let zeta = zeta_boundary(LatticePoint::new(5, 0), Direction::new(1).ok_or("side")?, k)?;
    println!("zeta at (5,0), side 1: {zeta:.8}");
    if zeta.im <= 0.0 {
        return Err("zeta must have positive imaginary part".into());
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
