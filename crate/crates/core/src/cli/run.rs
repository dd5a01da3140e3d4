//! End-to-end runs and their output files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::config::{ConfigError, RunConfig};
use crate::green::GreenError;
use crate::lattice::{embed, LatticePoint};
use crate::radiation::{check_radiation, RadiationError, RadiationReport};
use crate::solver::{residual_report, FieldGrid, FieldValue, Problem, ResidualReport, SolverError};

pub const BOUNDARY_THRESHOLD: f64 = 1e-10;
pub const INTERIOR_THRESHOLD: f64 = 1e-9;
pub const DRIFT_THRESHOLD: f64 = 1e-10;
pub const EXPONENT_THRESHOLD: f64 = 0.05;
/// Extra shells used by the truncation stability check.
pub const DRIFT_SHELLS: usize = 20;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("solver: {0}")]
    Solver(#[from] SolverError),
    #[error("green's function: {0}")]
    Green(#[from] GreenError),
    #[error("radiation check: {0}")]
    Radiation(#[from] RadiationError),
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// A named pass/fail diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &'static str, value: f64, threshold: f64) -> Self {
        Self {
            name,
            value,
            threshold,
            passed: value <= threshold,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Diagnostics {
    pub n_max: usize,
    pub boundary_points: usize,
    pub residuals: ResidualReport,
    pub relative_solve_residual: f64,
    pub truncation_drift: f64,
    pub radiation: Option<RadiationReport>,
    /// Largest `|Re u(x) - Re u(x')|` over mirrored pairs of the probed row.
    pub asymmetry: Option<f64>,
    pub checks: Vec<Check>,
}

impl Diagnostics {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_text(&self, config: &RunConfig) -> String {
        let mut s = String::new();
        let case = match config.case {
            crate::solver::Case::One => "I",
            crate::solver::Case::Two => "II",
        };
        let _ = writeln!(s, "case = {case}");
        let _ = writeln!(s, "k = {:.14e}", config.k);
        let _ = writeln!(s, "eps = {:.14e}", config.eps);
        let _ = writeln!(s, "eta = {:.14e}", config.eta);
        let _ = writeln!(s, "n_max = {}", self.n_max);
        let _ = writeln!(s, "boundary_points = {}", self.boundary_points);
        let _ = writeln!(s, "condition_estimate = {:.14e}", self.residuals.condition);
        let _ = writeln!(s, "relative_solve_residual = {:.14e}", self.relative_solve_residual);
        let _ = writeln!(s, "boundary_residual = {:.14e}", self.residuals.boundary_residual);
        let _ = writeln!(s, "interior_residual = {:.14e}", self.residuals.interior_residual);
        let _ = writeln!(s, "interior_points = {}", self.residuals.interior_points);
        let _ = writeln!(s, "decay_spread = {:.14e}", self.residuals.decay_spread);
        let _ = writeln!(s, "truncation_drift = {:.14e}", self.truncation_drift);
        if let Some(a) = self.asymmetry {
            let row = config.diagnostics.asymmetry_row.unwrap_or_default();
            let _ = writeln!(s, "row_{row}_mirror_asymmetry = {a:.14e}");
        }
        if let Some(r) = &self.radiation {
            let _ = writeln!(s, "ray_center = ({}, {})", r.center.x1, r.center.x2);
            for ray in &r.rays {
                let _ = writeln!(
                    s,
                    "ray ({}, {}): alpha = {:.14e}, decay_exponent = {:.14e}, phase_slope = [{:.14e}, {:.14e}], phase_decreasing = {}",
                    ray.ray.x1,
                    ray.ray.x2,
                    ray.saddle.alpha,
                    ray.decay_exponent,
                    ray.phase_slope[0],
                    ray.phase_slope[1],
                    ray.phase_decreasing()
                );
            }
        }
        for c in &self.checks {
            let _ = writeln!(
                s,
                "check {}: {} (value {:.6e}, threshold {:.6e})",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.value,
                c.threshold
            );
        }
        let _ = writeln!(s, "status = {}", if self.passed() { "pass" } else { "FAIL" });
        s
    }
}

#[derive(Debug, Clone)]
pub struct OutputBundle {
    pub grid: FieldGrid,
    pub field_csv: String,
    pub embedded_csv: String,
    pub diagnostics: Diagnostics,
    pub report: String,
}

/// Lattice-coordinate CSV, `x1,x2,re,im,abs`; hole points are skipped.
pub fn field_csv(grid: &FieldGrid) -> String {
    let mut s = String::from("x1,x2,re,im,abs\n");
    for (p, u) in grid.values() {
        let _ = writeln!(s, "{},{},{:.14e},{:.14e},{:.14e}", p.x1, p.x2, u.re, u.im, u.norm());
    }
    s
}

/// Plane-coordinate CSV, `ex,ey,re,im,abs`, same rows as [`field_csv`].
pub fn embedded_csv(grid: &FieldGrid) -> String {
    let mut s = String::from("ex,ey,re,im,abs\n");
    for (p, u) in grid.values() {
        let (ex, ey) = embed(p);
        let _ = writeln!(s, "{ex:.14e},{ey:.14e},{:.14e},{:.14e},{:.14e}", u.re, u.im, u.norm());
    }
    s
}

/// Mirror asymmetry of `Re u` along row `x2 = row` about the midpoint of the
/// hole points in that row. `None` if the row has no hole point or no
/// mirrored pair inside the grid.
pub fn row_asymmetry(grid: &FieldGrid, row: i64) -> Option<f64> {
    let holes: Vec<i64> = grid
        .cells
        .iter()
        .filter(|(p, v)| p.x2 == row && *v == FieldValue::Hole)
        .map(|(p, _)| p.x1)
        .collect();
    let (lo, hi) = (*holes.iter().min()?, *holes.iter().max()?);
    let sum = lo + hi;
    let mut worst: Option<f64> = None;
    for (p, u) in grid.values().filter(|(p, _)| p.x2 == row) {
        if let Some(FieldValue::Value(v)) = grid.get(LatticePoint::new(sum - p.x1, row)) {
            let d = (u.re - v.re).abs();
            worst = Some(worst.map_or(d, |w| w.max(d)));
        }
    }
    worst
}

pub fn run(config: &RunConfig) -> Result<OutputBundle, RunError> {
    config.validate()?;
    let problem = Problem::prepare(config.to_spec()?)?;
    let solution = problem.solve()?;
    let grid = problem.evaluate_field(&solution.phi, &config.window)?;
    let residuals = residual_report(&problem, &solution, &grid)?;

    let engine = problem.engine();
    let diameter = boundary_diameter(&problem);
    let truncation_drift = engine.truncation_drift(DRIFT_SHELLS, diameter)?;

    let radiation = match &config.radiation {
        Some(r) => {
            let rays: Vec<LatticePoint> = r.rays.iter().map(|p| LatticePoint::new(p[0], p[1])).collect();
            let field = |x| problem.field_at(&solution.phi, x);
            let center = config.ray_center();
            Some(check_radiation(field, center, &rays, (r.radii[0], r.radii[1]), config.k)?)
        }
        None => None,
    };
    let asymmetry = config
        .diagnostics
        .asymmetry_row
        .and_then(|row| row_asymmetry(&grid, row));

    let data_scale = 1.0 + crate::linalg::max_abs(problem.data());
    let mut checks = vec![
        Check::at_most("boundary_residual", residuals.boundary_residual, BOUNDARY_THRESHOLD * data_scale),
        Check::at_most("interior_residual", residuals.interior_residual, INTERIOR_THRESHOLD),
        Check::at_most("truncation_drift", truncation_drift, DRIFT_THRESHOLD),
    ];
    if let Some(r) = &radiation {
        checks.push(Check::at_most("decay_exponent", r.worst_exponent_error(), EXPONENT_THRESHOLD));
        let trend = r.rays.iter().filter(|ray| !ray.phase_decreasing()).count();
        checks.push(Check::at_most("phase_trend_violations", trend as f64, 0.0));
    }
    let diagnostics = Diagnostics {
        n_max: engine.n_max(),
        boundary_points: problem.enumeration().len(),
        residuals,
        relative_solve_residual: solution.relative_residual,
        truncation_drift,
        radiation,
        asymmetry,
        checks,
    };
    let report = diagnostics.to_text(config);
    Ok(OutputBundle {
        field_csv: field_csv(&grid),
        embedded_csv: embedded_csv(&grid),
        grid,
        diagnostics,
        report,
    })
}

fn boundary_diameter(problem: &Problem) -> usize {
    let en = problem.enumeration();
    let mut d = 1;
    for a in en.points() {
        for b in en.points() {
            d = d.max((*a - *b).hex_norm() as usize + 1);
        }
    }
    d
}

/// Writes the three output files into `dir`, creating it if needed.
pub fn write_bundle(bundle: &OutputBundle, config: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let files = [
        (&config.output.field, &bundle.field_csv),
        (&config.output.embedded, &bundle.embedded_csv),
        (&config.output.report, &bundle.report),
    ];
    let mut written = Vec::new();
    for (name, contents) in files {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(io(&path))?;
        written.push(path);
    }
    Ok(written)
}
