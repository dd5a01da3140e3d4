// Scattering by a three-point hole, driven by `hole_scattering.toml`.
//
// Pass an output directory to also write the CSV files and the report:
// `cargo run --example hole_scattering -- out/`.

use std::error::Error;
use std::path::Path;

use trihelm::cli::{parse_config, run, write_bundle};

const CONFIG: &str = include_str!("hole_scattering.toml");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    solve(None)
}

fn solve(out_dir: Option<&Path>) -> Result<(), Box<dyn Error>> {
    let config = parse_config(CONFIG)?;
    let bundle = run(&config)?;
    print!("{}", bundle.report);
    println!(
        "{} field values, {} hole points",
        bundle.grid.values().count(),
        bundle.grid.hole_count()
    );
    if let Some(dir) = out_dir {
        for path in write_bundle(&bundle, &config, dir)? {
            println!("wrote {}", path.display());
        }
    }
    if !bundle.diagnostics.passed() {
        let names: Vec<_> = bundle.diagnostics.failures().map(|c| c.name).collect();
        return Err(format!("failed checks: {}", names.join(", ")).into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    let dir = std::env::args().nth(1);
    if let Err(e) = solve(dir.as_deref().map(Path::new)) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
