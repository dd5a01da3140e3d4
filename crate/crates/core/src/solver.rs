//! Boundary systems for the exterior Dirichlet problem and the resulting
//! scattered field.
//!
//! Two geometries are supported:
//!
//! * Case I: `Ω = Z²` with a marked finite boundary. The field is the single
//!   layer `u = VΦ` and the system is `HΦ = F` with `H_ij = G(y_i - y_j)`.
//! * Case II: `Ω = Z² \ C` for a finite hole `C` sharing its boundary with
//!   `Ω`. The field is the combined layer `u = W'Φ + iη V_N Φ`, where `V_N`
//!   counts each boundary point once per side of the hole, and the system is
//!   `((1 + iη) H N - K) Φ = F` with `N = diag(n_i)` and
//!   `K_ij = Σ_l G(y_i - y⁻_jl)`.
//!
//! All Green's function values of one problem come from a single engine.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::green::{EngineConfig, GreenEngine, GreenError, DEFAULT_EPS};
use crate::lattice::{
    check_cone_condition, enumerate_boundary, neighborhood, BoundaryEnumeration, LatticeError,
    LatticePoint, Region,
};
use crate::linalg::{mat_vec, max_abs, CMatrix, LuFactor};
use crate::potentials::{
    double_layer_complement, single_layer, single_layer_with_sides, PotentialError,
};

/// Systems whose condition estimate exceeds this are rejected.
pub const MAX_CONDITION: f64 = 1e14;
/// Required relative residual `|MΦ - F| / |F|` of a solved system.
pub const SOLVE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid geometry: {0}")]
    Geometry(#[from] LatticeError),
    #[error(transparent)]
    Green(#[from] GreenError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no boundary value given for {0}")]
    MissingBoundaryValue(LatticePoint),
    #[error("boundary value given for {0}, which is not a boundary point")]
    StrayBoundaryValue(LatticePoint),
    #[error("boundary system is numerically singular (condition estimate {condition:e})")]
    NumericallySingular { condition: f64 },
    #[error("relative residual {residual:e} of the boundary system exceeds the tolerance")]
    ResidualTooLarge { residual: f64 },
}

type Result<T> = std::result::Result<T, SolverError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    #[serde(rename = "I")]
    One,
    #[serde(rename = "II")]
    Two,
}

/// Scatterer geometry as given by the user.
#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    CaseOne {
        boundary: BTreeSet<LatticePoint>,
    },
    CaseTwo {
        hole: BTreeSet<LatticePoint>,
        boundary: BTreeSet<LatticePoint>,
    },
}

impl Geometry {
    pub fn case(&self) -> Case {
        match self {
            Self::CaseOne { .. } => Case::One,
            Self::CaseTwo { .. } => Case::Two,
        }
    }

    pub fn boundary(&self) -> &BTreeSet<LatticePoint> {
        match self {
            Self::CaseOne { boundary } | Self::CaseTwo { boundary, .. } => boundary,
        }
    }

    pub fn hole(&self) -> Option<&BTreeSet<LatticePoint>> {
        match self {
            Self::CaseOne { .. } => None,
            Self::CaseTwo { hole, .. } => Some(hole),
        }
    }
}

/// Dirichlet data on the boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryData {
    Constant(Complex64),
    Values(BTreeMap<LatticePoint, Complex64>),
}

impl BoundaryData {
    fn vector(&self, enumeration: &BoundaryEnumeration) -> Result<Vec<Complex64>> {
        match self {
            Self::Constant(c) => Ok(vec![*c; enumeration.len()]),
            Self::Values(map) => {
                if let Some(p) = map.keys().find(|p| enumeration.index_of(**p).is_none()) {
                    return Err(SolverError::StrayBoundaryValue(*p));
                }
                enumeration
                    .points()
                    .iter()
                    .map(|y| map.get(y).copied().ok_or(SolverError::MissingBoundaryValue(*y)))
                    .collect()
            }
        }
    }
}

/// Rectangle `[x1_min, x1_max] × [x2_min, x2_max]` in lattice coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub x1: [i64; 2],
    pub x2: [i64; 2],
}

impl Window {
    pub fn new(x1: [i64; 2], x2: [i64; 2]) -> Self {
        Self { x1, x2 }
    }

    pub fn square(lo: i64, hi: i64) -> Self {
        Self::new([lo, hi], [lo, hi])
    }

    pub fn is_empty(&self) -> bool {
        self.x1[0] > self.x1[1] || self.x2[0] > self.x2[1]
    }

    pub fn area(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            ((self.x1[1] - self.x1[0] + 1) * (self.x2[1] - self.x2[0] + 1)) as usize
        }
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        (self.x1[0]..=self.x1[1]).contains(&p.x1) && (self.x2[0]..=self.x2[1]).contains(&p.x2)
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        (self.x1[0]..=self.x1[1])
            .flat_map(move |a| (self.x2[0]..=self.x2[1]).map(move |b| LatticePoint::new(a, b)))
    }

    fn corners(&self) -> [LatticePoint; 4] {
        [
            LatticePoint::new(self.x1[0], self.x2[0]),
            LatticePoint::new(self.x1[0], self.x2[1]),
            LatticePoint::new(self.x1[1], self.x2[0]),
            LatticePoint::new(self.x1[1], self.x2[1]),
        ]
    }
}

/// Everything needed to set up one exterior problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub geometry: Geometry,
    pub k: f64,
    pub eps: f64,
    /// Engine truncation; `None` picks one from the required range.
    pub n_max: Option<usize>,
    /// Coupling of the combined layer (Case II).
    pub eta: f64,
    pub data: BoundaryData,
    pub window: Window,
    /// Extra Euclidean radius (in lattice coordinates, about the origin) at
    /// which the field will be probed beyond the window.
    pub probe_radius: f64,
}

impl ProblemSpec {
    pub fn new(geometry: Geometry, k: f64, data: BoundaryData, window: Window) -> Self {
        Self {
            geometry,
            k,
            eps: DEFAULT_EPS,
            n_max: None,
            eta: 1.0,
            data,
            window,
            probe_radius: 0.0,
        }
    }
}

/// A validated problem with its boundary enumeration and engine.
#[derive(Debug, Clone)]
pub struct Problem {
    spec: ProblemSpec,
    region: Region,
    enumeration: BoundaryEnumeration,
    engine: GreenEngine,
    data: Vec<Complex64>,
}

impl Problem {
    pub fn prepare(spec: ProblemSpec) -> Result<Self> {
        if !(spec.k.is_finite() && spec.k > 0.0 && spec.k < 2.0 * 2f64.sqrt()) {
            return Err(SolverError::InvalidParameter(format!(
                "wave number {} outside (0, 2√2)",
                spec.k
            )));
        }
        if spec.geometry.case() == Case::Two && !(spec.eta.is_finite() && spec.eta != 0.0) {
            return Err(SolverError::InvalidParameter(format!(
                "coupling η = {} must be a nonzero real",
                spec.eta
            )));
        }
        let (region, enumeration) = build_geometry(&spec.geometry)?;
        let data = spec.data.vector(&enumeration)?;
        let n_max = match spec.n_max {
            Some(n) => n,
            None => EngineConfig::auto_n_max(required_range(&spec, &enumeration)),
        };
        let config = EngineConfig::new(spec.k).eps(spec.eps).n_max(n_max);
        let engine = GreenEngine::build(config)?;
        Ok(Self {
            spec,
            region,
            enumeration,
            engine,
            data,
        })
    }

    /// Same problem with different Dirichlet data; reuses the engine.
    pub fn with_data(&self, data: BoundaryData) -> Result<Self> {
        let values = data.vector(&self.enumeration)?;
        let mut spec = self.spec.clone();
        spec.data = data;
        Ok(Self {
            spec,
            data: values,
            ..self.clone()
        })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    /// The exterior region `Ω`.
    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn enumeration(&self) -> &BoundaryEnumeration {
        &self.enumeration
    }

    pub fn engine(&self) -> &GreenEngine {
        &self.engine
    }

    /// `F = (f(y_1), ..., f(y_m))`.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn assemble(&self) -> Result<BoundarySystem> {
        let matrix = match self.spec.geometry.case() {
            Case::One => assemble_case1(&self.engine, &self.enumeration)?,
            Case::Two => assemble_case2(&self.engine, &self.enumeration, self.spec.eta)?,
        };
        Ok(BoundarySystem {
            case: self.spec.geometry.case(),
            matrix,
            rhs: self.data.clone(),
        })
    }

    pub fn solve(&self) -> Result<Solution> {
        solve_system(&self.assemble()?)
    }

    /// `u(x)` from a density, by the ansatz of the problem's case.
    pub fn field_at(&self, phi: &[Complex64], x: LatticePoint) -> Result<Complex64> {
        let e = &self.engine;
        let en = &self.enumeration;
        Ok(match self.spec.geometry.case() {
            Case::One => single_layer(e, en, phi, x)?,
            Case::Two => {
                let ieta = Complex64::new(0.0, self.spec.eta);
                double_layer_complement(e, en, phi, x)? + ieta * single_layer_with_sides(e, en, phi, x)?
            }
        })
    }

    /// Whether `x` is a hole point, where the field is undefined.
    pub fn is_hole(&self, x: LatticePoint) -> bool {
        self.spec.geometry.hole().is_some_and(|h| h.contains(&x))
    }

    pub fn evaluate_field(&self, phi: &[Complex64], window: &Window) -> Result<FieldGrid> {
        let mut cells = Vec::with_capacity(window.area());
        for x in window.points() {
            let value = if self.is_hole(x) {
                FieldValue::Hole
            } else {
                FieldValue::Value(self.field_at(phi, x)?)
            };
            cells.push((x, value));
        }
        Ok(FieldGrid {
            k: self.spec.k,
            case: self.spec.geometry.case(),
            window: *window,
            cells,
        })
    }
}

/// Checks the region axioms, the shared boundary and the cone condition.
pub fn validate_geometry(geometry: &Geometry) -> Result<()> {
    build_geometry(geometry).map(|_| ())
}

/// The boundary enumeration a problem with this geometry would use.
pub fn enumerate_geometry(geometry: &Geometry) -> Result<BoundaryEnumeration> {
    build_geometry(geometry).map(|(_, e)| e)
}

fn build_geometry(geometry: &Geometry) -> Result<(Region, BoundaryEnumeration)> {
    match geometry {
        Geometry::CaseOne { boundary } => {
            let region = Region::cofinite(boundary.iter().copied(), [])?;
            let enumeration = enumerate_boundary(&region)?;
            Ok((region, enumeration))
        }
        Geometry::CaseTwo { hole, boundary } => {
            if boundary.is_empty() {
                return Err(LatticeError::EmptyBoundary.into());
            }
            let exterior = Region::cofinite(boundary.iter().copied(), hole.iter().copied())?;
            let inner = Region::finite(hole.iter().copied(), boundary.iter().copied())?;
            check_cone_condition(hole)?;
            let enumeration = enumerate_boundary(&inner)?;
            Ok((exterior, enumeration))
        }
    }
}

/// Largest graph distance between a boundary or inward point and a point
/// where the field or its stencil may be evaluated.
fn required_range(spec: &ProblemSpec, enumeration: &BoundaryEnumeration) -> usize {
    let sources: Vec<LatticePoint> = (0..enumeration.len())
        .flat_map(|i| std::iter::once(enumeration.point(i)).chain(enumeration.inward(i).iter().copied()))
        .collect();
    let mut reach = 0;
    for a in &sources {
        for b in &sources {
            reach = reach.max((*a - *b).hex_norm());
        }
        if !spec.window.is_empty() {
            for c in spec.window.corners() {
                reach = reach.max((c - *a).hex_norm() + 1);
            }
        }
        if spec.probe_radius > 0.0 {
            let probe = (2f64.sqrt() * spec.probe_radius).ceil() as i64;
            reach = reach.max(probe + a.hex_norm() + 1);
        }
    }
    reach as usize
}

/// `H_ij = G(y_i - y_j)`.
pub fn assemble_case1(
    engine: &GreenEngine,
    enumeration: &BoundaryEnumeration,
) -> Result<CMatrix> {
    let m = enumeration.len();
    let mut h = CMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            h[(i, j)] = engine.green(enumeration.point(i) - enumeration.point(j))?;
        }
    }
    Ok(h)
}

/// `(1 + iη) H N - K`; the enumeration must carry the sides of the hole.
pub fn assemble_case2(
    engine: &GreenEngine,
    enumeration: &BoundaryEnumeration,
    eta: f64,
) -> Result<CMatrix> {
    if enumeration.frame() != crate::lattice::SideFrame::Finite {
        return Err(PotentialError::CaseMismatch.into());
    }
    let m = enumeration.len();
    let factor = Complex64::new(1.0, eta);
    let mut a = CMatrix::zeros(m, m);
    for i in 0..m {
        let yi = enumeration.point(i);
        for j in 0..m {
            let n = enumeration.side_count(j) as f64;
            let mut entry = factor * n * engine.green(yi - enumeration.point(j))?;
            for w in enumeration.inward(j) {
                entry -= engine.green(yi - *w)?;
            }
            a[(i, j)] = entry;
        }
    }
    Ok(a)
}

#[derive(Debug, Clone)]
pub struct BoundarySystem {
    pub case: Case,
    pub matrix: CMatrix,
    pub rhs: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub phi: Vec<Complex64>,
    /// 1-norm condition estimate of the system matrix.
    pub condition: f64,
    /// `|MΦ - F|∞ / |F|∞`, zero for homogeneous data.
    pub relative_residual: f64,
}

/// Pivoted LU solve with one step of iterative refinement.
pub fn solve_system(system: &BoundarySystem) -> Result<Solution> {
    let m = &system.matrix;
    if m.nrows() != m.ncols() || m.nrows() != system.rhs.len() {
        return Err(SolverError::InvalidParameter(format!(
            "system is {}×{} with {} right-hand sides",
            m.nrows(),
            m.ncols(),
            system.rhs.len()
        )));
    }
    let lu = LuFactor::new(m);
    let rcond = lu.rcond();
    let condition = if rcond > 0.0 { 1.0 / rcond } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(SolverError::NumericallySingular { condition });
    }
    let f = &system.rhs;
    let f_norm = max_abs(f);
    let residual = |phi: &[Complex64]| -> f64 {
        let r: Vec<Complex64> = mat_vec(m, phi).iter().zip(f).map(|(a, b)| a - b).collect();
        if f_norm == 0.0 {
            max_abs(&r)
        } else {
            max_abs(&r) / f_norm
        }
    };
    let mut phi = lu.solve_vec(f);
    let mut res = residual(&phi);
    if res > SOLVE_TOLERANCE * 0.1 {
        let r: Vec<Complex64> = mat_vec(m, &phi).iter().zip(f).map(|(a, b)| b - a).collect();
        let delta = lu.solve_vec(&r);
        let refined: Vec<Complex64> = phi.iter().zip(&delta).map(|(a, b)| a + b).collect();
        let refined_res = residual(&refined);
        if refined_res < res {
            phi = refined;
            res = refined_res;
        }
    }
    if res > SOLVE_TOLERANCE {
        return Err(SolverError::ResidualTooLarge { residual: res });
    }
    Ok(Solution {
        phi,
        condition,
        relative_residual: res,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldValue {
    Value(Complex64),
    /// A point of the hole, where the field is not defined.
    Hole,
}

impl FieldValue {
    pub fn value(self) -> Option<Complex64> {
        match self {
            Self::Value(v) => Some(v),
            Self::Hole => None,
        }
    }
}

/// Field values over a window, in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub k: f64,
    pub case: Case,
    pub window: Window,
    pub cells: Vec<(LatticePoint, FieldValue)>,
}

impl FieldGrid {
    pub fn get(&self, x: LatticePoint) -> Option<FieldValue> {
        self.cells
            .binary_search_by(|(p, _)| p.cmp(&x))
            .ok()
            .map(|i| self.cells[i].1)
    }

    pub fn values(&self) -> impl Iterator<Item = (LatticePoint, Complex64)> + '_ {
        self.cells.iter().filter_map(|(p, v)| v.value().map(|v| (*p, v)))
    }

    pub fn hole_count(&self) -> usize {
        self.cells.iter().filter(|(_, v)| *v == FieldValue::Hole).count()
    }
}

/// Residual diagnostics of a solved problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// `max_i |u(y_i) - f(y_i)|`.
    pub boundary_residual: f64,
    /// Largest `|(Δ_d + λ) u(x)|` over interior window points.
    pub interior_residual: f64,
    pub condition: f64,
    /// Largest `| |u(x)| |x|^{1/2} - median |` along the six lattice rays
    /// from the origin inside the window, over points with `|x| >= 5`.
    pub decay_spread: f64,
    pub interior_points: usize,
}

pub fn residual_report(
    problem: &Problem,
    solution: &Solution,
    grid: &FieldGrid,
) -> Result<ResidualReport> {
    let phi = &solution.phi;
    let mut cache: HashMap<LatticePoint, Complex64> = grid.values().collect();
    let mut field = |x: LatticePoint| -> Result<Complex64> {
        if let Some(v) = cache.get(&x) {
            return Ok(*v);
        }
        let v = problem.field_at(phi, x)?;
        cache.insert(x, v);
        Ok(v)
    };

    let mut boundary_residual: f64 = 0.0;
    for (y, f) in problem.enumeration().points().iter().zip(problem.data()) {
        boundary_residual = boundary_residual.max((field(*y)? - f).norm());
    }

    let lambda = problem.engine().lambda();
    let mut interior_residual: f64 = 0.0;
    let mut interior_points = 0;
    for (x, _) in grid.values().collect::<Vec<_>>() {
        if !problem.region().is_interior(x) {
            continue;
        }
        let mut acc = (lambda - 6.0) * field(x)?;
        for n in neighborhood(x) {
            acc += field(n)?;
        }
        interior_residual = interior_residual.max(acc.norm());
        interior_points += 1;
    }

    let decay_spread = decay_spread(grid);
    Ok(ResidualReport {
        boundary_residual,
        interior_residual,
        condition: solution.condition,
        decay_spread,
        interior_points,
    })
}

fn decay_spread(grid: &FieldGrid) -> f64 {
    let mut worst: f64 = 0.0;
    for d in crate::lattice::Direction::ALL {
        let mut samples = Vec::new();
        for t in 1.. {
            let x = t * d.offset();
            if !grid.window.contains(x) {
                break;
            }
            let r = x.coord_norm();
            if r < 5.0 {
                continue;
            }
            if let Some(FieldValue::Value(u)) = grid.get(x) {
                samples.push(u.norm() * r.sqrt());
            }
        }
        if samples.is_empty() {
            continue;
        }
        let mut sorted = samples.clone();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[sorted.len() / 2];
        for s in samples {
            worst = worst.max((s - median).abs());
        }
    }
    worst
}
