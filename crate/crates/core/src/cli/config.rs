//! Run configuration file.
//!
//! A run is described by one TOML document:
//!
//! ```toml
//! case = "II"                  # "I": whole plane, "II": plane minus a hole
//! k = 1.4142135623730951       # wave number in (0, 2√2)
//! eps = 1e-6                   # optional damping, default 1e-6
//! n_max = 160                  # optional truncation, default chosen from the window
//! eta = 1.0                    # optional coupling for case II, default 1
//! hole = [[2, 2], [3, 2], [3, 3]]          # case II only
//! boundary = [[2, 1], [3, 1], [4, 1]]      # ...
//!
//! [data]                       # exactly one of the two keys
//! constant = [1.0, 0.0]        # f ≡ re + i·im
//! # values = [{ point = [2, 1], re = 1.0, im = 0.0 }, ...]
//!
//! [window]                     # optional, default [-15, 20]²
//! x1 = [-15, 20]
//! x2 = [-15, 20]
//!
//! [output]                     # optional file names inside the output directory
//! field = "field.csv"
//! embedded = "field_embedded.csv"
//! report = "report.txt"
//!
//! [radiation]                  # optional far-field checks along integer rays
//! center = [3, 2]              # optional ray origin, default: boundary centroid
//! rays = [[1, 0], [0, 1], [1, 1]]
//! radii = [20.0, 80.0]
//!
//! [diagnostics]                # optional
//! asymmetry_row = 2            # row x2 = const probed for mirror asymmetry
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::LatticePoint;
use crate::solver::{validate_geometry, BoundaryData, Case, Geometry, ProblemSpec, SolverError, Window};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{}: {message}", line.map_or("config".to_string(), |l| format!("line {l}")))]
    Parse {
        line: Option<usize>,
        message: String,
    },
    #[error("invalid config: {0}")]
    Validation(String),
}

impl From<SolverError> for ConfigError {
    fn from(e: SolverError) -> Self {
        ConfigError::Validation(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointValue {
    pub point: [i64; 2],
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<PointValue>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_field")]
    pub field: String,
    #[serde(default = "default_embedded")]
    pub embedded: String,
    #[serde(default = "default_report")]
    pub report: String,
}

fn default_field() -> String {
    "field.csv".into()
}
fn default_embedded() -> String {
    "field_embedded.csv".into()
}
fn default_report() -> String {
    "report.txt".into()
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            field: default_field(),
            embedded: default_embedded(),
            report: default_report(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiationConfig {
    /// Common start point of the rays; defaults to the rounded centroid of
    /// the boundary points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[i64; 2]>,
    pub rays: Vec<[i64; 2]>,
    #[serde(default = "default_radii")]
    pub radii: [f64; 2],
}

fn default_radii() -> [f64; 2] {
    [20.0, 80.0]
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asymmetry_row: Option<i64>,
}

pub const DEFAULT_WINDOW: Window = Window {
    x1: [-15, 20],
    x2: [-15, 20],
};

fn default_window() -> Window {
    DEFAULT_WINDOW
}

fn default_eps() -> f64 {
    crate::green::DEFAULT_EPS
}

fn default_eta() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub case: Case,
    pub k: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default)]
    pub hole: Vec<[i64; 2]>,
    pub boundary: Vec<[i64; 2]>,
    pub data: DataConfig,
    #[serde(default = "default_window")]
    pub window: Window,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radiation: Option<RadiationConfig>,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
}

fn points(list: &[[i64; 2]]) -> impl Iterator<Item = LatticePoint> + '_ {
    list.iter().map(|p| LatticePoint::new(p[0], p[1]))
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let config: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.span().map(|s| line_of(text, s.start)),
        message: e.message().to_string(),
    })?;
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    /// Serializes to the documented schema.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn geometry(&self) -> Geometry {
        let boundary = points(&self.boundary).collect();
        match self.case {
            Case::One => Geometry::CaseOne { boundary },
            Case::Two => Geometry::CaseTwo {
                hole: points(&self.hole).collect(),
                boundary,
            },
        }
    }

    fn boundary_data(&self) -> Result<BoundaryData, ConfigError> {
        match (&self.data.constant, &self.data.values) {
            (Some([re, im]), None) => Ok(BoundaryData::Constant(Complex64::new(*re, *im))),
            (None, Some(values)) => {
                let mut map = BTreeMap::new();
                for v in values {
                    let p = LatticePoint::new(v.point[0], v.point[1]);
                    if map.insert(p, Complex64::new(v.re, v.im)).is_some() {
                        return Err(ConfigError::Validation(format!("data: duplicate value for {p}")));
                    }
                }
                Ok(BoundaryData::Values(map))
            }
            _ => Err(ConfigError::Validation(
                "data: give exactly one of `constant` and `values`".into(),
            )),
        }
    }

    pub fn to_spec(&self) -> Result<ProblemSpec, ConfigError> {
        let mut spec = ProblemSpec::new(self.geometry(), self.k, self.boundary_data()?, self.window);
        spec.eps = self.eps;
        spec.n_max = self.n_max;
        spec.eta = self.eta;
        if let Some(r) = &self.radiation {
            spec.probe_radius = r.radii[1] + self.ray_center().coord_norm() + 1.0;
        }
        Ok(spec)
    }

    /// Start point of the radiation rays.
    pub fn ray_center(&self) -> LatticePoint {
        if let Some([a, b]) = self.radiation.as_ref().and_then(|r| r.center) {
            return LatticePoint::new(a, b);
        }
        let n = self.boundary.len().max(1) as f64;
        let (s1, s2) = self.boundary.iter().fold((0.0, 0.0), |(a, b), p| (a + p[0] as f64, b + p[1] as f64));
        LatticePoint::new((s1 / n).round() as i64, (s2 / n).round() as i64)
    }

    /// Checks parameters and geometry without building an engine.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |m: String| Err(ConfigError::Validation(m));
        if !(self.k.is_finite() && self.k > 0.0 && self.k < 2.0 * 2f64.sqrt()) {
            return fail(format!("k = {} is outside (0, 2√2)", self.k));
        }
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return fail(format!("eps = {} must be positive", self.eps));
        }
        if self.n_max == Some(0) {
            return fail("n_max must be positive".into());
        }
        if self.boundary.is_empty() {
            return fail("boundary: empty boundary".into());
        }
        match self.case {
            Case::One if !self.hole.is_empty() => {
                return fail("hole: case I has no hole".into());
            }
            Case::Two if self.hole.is_empty() => {
                return fail("hole: case II needs hole points".into());
            }
            Case::Two if !(self.eta.is_finite() && self.eta != 0.0) => {
                return fail(format!("eta = {} must be a nonzero real", self.eta));
            }
            _ => {}
        }
        if self.window.is_empty() {
            return fail("window: empty range".into());
        }
        if let Some(r) = &self.radiation {
            if r.rays.is_empty() || r.rays.contains(&[0, 0]) {
                return fail("radiation: rays must be nonzero and nonempty".into());
            }
            if !(r.radii[0] > 0.0 && r.radii[1] > r.radii[0]) {
                return fail("radiation: radii must satisfy 0 < r_min < r_max".into());
            }
        }
        validate_geometry(&self.geometry())?;
        let spec = self.to_spec()?;
        let enumeration = crate::solver::enumerate_geometry(&spec.geometry)?;
        if let BoundaryData::Values(map) = &spec.data {
            for y in enumeration.points() {
                if !map.contains_key(y) {
                    return fail(format!("data: no value for boundary point {y}"));
                }
            }
            if let Some(p) = map.keys().find(|p| enumeration.index_of(**p).is_none()) {
                return fail(format!("data: {p} is not a boundary point"));
            }
        }
        Ok(())
    }
}
