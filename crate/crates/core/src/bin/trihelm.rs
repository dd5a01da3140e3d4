use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use trihelm::acceptance;
use trihelm::cli::{parse_config, run, write_bundle};
use trihelm::green::{EngineConfig, GreenEngine};
use trihelm::lattice::LatticePoint;
use trihelm::radiation::solve_dispersion;

#[derive(Parser)]
#[command(version, about = "Exterior Dirichlet problems for the discrete Helmholtz equation on the triangular lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the problem described by a config file and write CSV and report files
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Print G(x) and its stencil residual
    Green {
        #[arg(long)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        x1: i64,
        #[arg(long, allow_hyphen_values = true)]
        x2: i64,
        #[arg(long, default_value_t = trihelm::green::DEFAULT_EPS)]
        eps: f64,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Print the saddle point (ξ1*, ξ2*, ζ, μ) for a direction
    Dispersion {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        k: f64,
    },
    /// Run the acceptance suite
    Selftest,
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match command {
        Command::Solve { config, out_dir } => {
            let text = std::fs::read_to_string(&config)?;
            let config = parse_config(&text)?;
            let bundle = run(&config)?;
            for path in write_bundle(&bundle, &config, &out_dir)? {
                println!("wrote {}", path.display());
            }
            print!("{}", bundle.report);
            if bundle.diagnostics.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                for c in bundle.diagnostics.failures() {
                    eprintln!("threshold exceeded: {} = {:.6e} > {:.6e}", c.name, c.value, c.threshold);
                }
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Green { k, x1, x2, eps, nmax } => {
            let x = LatticePoint::new(x1, x2);
            let n_max = nmax.unwrap_or_else(|| EngineConfig::auto_n_max(x.hex_norm() as usize + 1));
            let engine = GreenEngine::build(EngineConfig::new(k).eps(eps).n_max(n_max))?;
            let g = engine.green(x)?;
            let r = engine.stencil_defect(x)?;
            println!("x = ({x1}, {x2})");
            println!("n_max = {n_max}");
            println!("re = {:.14e}", g.re);
            println!("im = {:.14e}", g.im);
            println!("abs = {:.14e}", g.norm());
            println!("stencil_residual = {:.14e}", r.norm());
            Ok(ExitCode::SUCCESS)
        }
        Command::Dispersion { alpha, k } => {
            let sp = solve_dispersion(alpha, k)?;
            println!("xi1 = {:.14e}", sp.xi1);
            println!("xi2 = {:.14e}", sp.xi2);
            println!("zeta = {:.14e}", sp.zeta);
            println!("mu = {:.14e}", sp.mu());
            println!("residual = {:.14e}", sp.residual());
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => {
            let outcomes = acceptance::run_all();
            for o in &outcomes {
                println!("{o}");
            }
            let ok = outcomes.iter().all(|o| o.passed);
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
