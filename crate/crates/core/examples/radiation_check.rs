// Far-field behaviour of the point-source field: amplitude decay, phase
// progression and the far-field pattern along a few rays.

use std::error::Error;

use trihelm::green::{EngineConfig, GreenEngine};
use trihelm::lattice::LatticePoint;
use trihelm::radiation::{check_radiation, far_field_estimate};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let k = 2f64.sqrt();
    let engine = GreenEngine::build(EngineConfig::new(k).n_max(130))?;
    let source = LatticePoint::new(1, -2);
    let g = |x: LatticePoint| engine.green(x - source);
    let rays = [LatticePoint::new(1, 0), LatticePoint::new(1, 1), LatticePoint::new(-1, 2)];

    let report = check_radiation(g, source, &rays, (20.0, 80.0), k)?;
    for ray in &report.rays {
        println!(
            "ray {:>8}: decay exponent {:+.4}, phase slopes [{:+.3}, {:+.3}], decreasing {}",
            ray.ray.to_string(),
            ray.decay_exponent,
            ray.phase_slope[0],
            ray.phase_slope[1],
            ray.phase_decreasing()
        );
    }

    let far = far_field_estimate(g, source, LatticePoint::new(1, 0), &[20.0, 40.0, 80.0], k)?;
    println!("far-field pattern along (1,0): {:.6}", far.value);

    if !report.passes(0.05) {
        return Err(format!("worst exponent error {:.3e}", report.worst_exponent_error()).into());
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
