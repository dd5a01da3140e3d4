//! Stationary phase data of the dispersion relation and numerical checks of
//! the radiation condition.
//!
//! For a direction `α` (measured in lattice coordinates) the saddle point
//! `ξ* = (ξ1, ξ2)` and the scale `ζ > 0` solve
//!
//! ```text
//! 2ζ (sin ξ1 + sin(ξ1 - ξ2)) = cos α
//! 2ζ (sin ξ2 - sin(ξ1 - ξ2)) = sin α
//! k² - 6 + 2cos ξ1 + 2cos ξ2 + 2cos(ξ1 - ξ2) = 0
//! ```
//!
//! A radiating field behaves like `e^{i ξ*·x} |x|^{-1/2}` along the ray of
//! direction `α`, so `u(x + e_j) / u(x) → e^{i ξ*·e_j}`.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use thiserror::Error;

use crate::lattice::{Direction, LatticePoint};

/// Required residual of the three saddle point equations.
pub const DISPERSION_TOLERANCE: f64 = 1e-12;
const MAX_STEP: f64 = PI / 64.0;
const NEWTON_ITERATIONS: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadiationError {
    #[error("saddle point iteration did not converge for α = {alpha}, k = {k}")]
    NoConvergence { alpha: f64, k: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("ray {ray} has {found} samples in the radius range, {needed} needed")]
    InsufficientSamples {
        ray: LatticePoint,
        found: usize,
        needed: usize,
    },
    #[error("far-field estimates do not settle: successive differences {differences:?}")]
    NonConvergent { differences: Vec<f64> },
    #[error("field evaluation failed: {0}")]
    Field(String),
}

type Result<T> = std::result::Result<T, RadiationError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddlePoint {
    pub alpha: f64,
    pub k: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub zeta: f64,
}

impl SaddlePoint {
    /// `ξ*·e_j`.
    pub fn phase(&self, j: Direction) -> f64 {
        let e = j.offset();
        self.xi1 * e.x1 as f64 + self.xi2 * e.x2 as f64
    }

    /// `μ = ξ*·x̂` with `x̂ = (cos α, sin α)`.
    pub fn mu(&self) -> f64 {
        self.xi1 * self.alpha.cos() + self.xi2 * self.alpha.sin()
    }

    /// Largest absolute residual of the three defining equations.
    pub fn residual(&self) -> f64 {
        let f = equations(self.xi1, self.xi2, self.zeta, self.alpha, self.k * self.k);
        f.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn equations(x1: f64, x2: f64, zeta: f64, alpha: f64, k2: f64) -> [f64; 3] {
    let d = x1 - x2;
    [
        2.0 * zeta * (x1.sin() + d.sin()) - alpha.cos(),
        2.0 * zeta * (x2.sin() - d.sin()) - alpha.sin(),
        k2 - 6.0 + 2.0 * x1.cos() + 2.0 * x2.cos() + 2.0 * d.cos(),
    ]
}

fn jacobian(x1: f64, x2: f64, zeta: f64) -> [[f64; 3]; 3] {
    let d = x1 - x2;
    let (s1, s2, sd) = (x1.sin(), x2.sin(), d.sin());
    let (c1, c2, cd) = (x1.cos(), x2.cos(), d.cos());
    [
        [2.0 * zeta * (c1 + cd), -2.0 * zeta * cd, 2.0 * (s1 + sd)],
        [-2.0 * zeta * cd, 2.0 * zeta * (c2 + cd), 2.0 * (s2 - sd)],
        [-2.0 * (s1 + sd), -2.0 * (s2 - sd), 0.0],
    ]
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Cramer's rule for `J x = b`.
fn solve3(j: &[[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = det3(j);
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let mut x = [0.0; 3];
    for (col, xi) in x.iter_mut().enumerate() {
        let mut m = *j;
        for row in 0..3 {
            m[row][col] = b[row];
        }
        *xi = det3(&m) / det;
    }
    Some(x)
}

fn norm(f: &[f64; 3]) -> f64 {
    f.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Damped Newton from `start`; returns the converged point.
fn newton(start: [f64; 3], alpha: f64, k2: f64) -> Option<[f64; 3]> {
    let mut v = start;
    let mut f = equations(v[0], v[1], v[2], alpha, k2);
    for _ in 0..NEWTON_ITERATIONS {
        if norm(&f) <= DISPERSION_TOLERANCE * 0.1 {
            break;
        }
        let step = solve3(&jacobian(v[0], v[1], v[2]), [-f[0], -f[1], -f[2]])?;
        let mut t = 1.0;
        loop {
            let trial = [v[0] + t * step[0], v[1] + t * step[1], v[2] + t * step[2]];
            let ft = equations(trial[0], trial[1], trial[2], alpha, k2);
            if trial[2] > 0.0 && norm(&ft) < norm(&f) {
                v = trial;
                f = ft;
                break;
            }
            t *= 0.5;
            if t < 1e-10 {
                return (norm(&f) <= DISPERSION_TOLERANCE).then_some(v);
            }
        }
    }
    (norm(&f) <= DISPERSION_TOLERANCE).then_some(v)
}

/// The saddle point for direction `alpha` (lattice coordinates).
///
/// Starts from the symmetric solution at `α = π/4` and continues along the
/// shorter arc in steps of at most `π/64`.
pub fn solve_dispersion(alpha: f64, k: f64) -> Result<SaddlePoint> {
    if !(k.is_finite() && k > 0.0 && k < 2.0 * 2f64.sqrt()) {
        return Err(RadiationError::InvalidParameter(format!(
            "wave number {k} outside (0, 2√2)"
        )));
    }
    if !alpha.is_finite() {
        return Err(RadiationError::InvalidParameter(format!("angle {alpha}")));
    }
    let k2 = k * k;
    // on the diagonal ξ1 = ξ2 = t with cos t = (4 - k²)/4
    let t = ((4.0 - k2) / 4.0).acos();
    let mut v = [t, t, 2f64.sqrt() / (4.0 * t.sin())];
    let delta = (alpha - FRAC_PI_4 + PI).rem_euclid(TAU) - PI;
    let steps = (delta.abs() / MAX_STEP).ceil().max(1.0) as usize;
    let fail = || RadiationError::NoConvergence { alpha, k };
    for s in 1..=steps {
        let a = FRAC_PI_4 + delta * s as f64 / steps as f64;
        v = newton(v, a, k2).ok_or_else(fail)?;
    }
    let sp = SaddlePoint {
        alpha: alpha.rem_euclid(TAU),
        k,
        xi1: v[0],
        xi2: v[1],
        zeta: v[2],
    };
    if sp.zeta > 0.0 && sp.residual() <= DISPERSION_TOLERANCE {
        Ok(sp)
    } else {
        Err(fail())
    }
}

/// `ζ(y, k) = 1 - e^{-i ξ*·e_j}` for a boundary point `y` on side `j`, with
/// `ξ*` taken in the direction of `y`.
///
/// Sides 4 to 6 use `e_{j+3} = -e_j` in the same formula.
pub fn zeta_boundary(y: LatticePoint, j: Direction, k: f64) -> Result<Complex64> {
    if y == LatticePoint::ORIGIN {
        return Err(RadiationError::InvalidParameter("the origin has no direction".into()));
    }
    let sp = solve_dispersion(y.coord_angle(), k)?;
    Ok(Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -sp.phase(j)))
}

/// Samples of a field along one ray.
#[derive(Debug, Clone, PartialEq)]
pub struct RayReport {
    /// Integer direction of the ray; sample points are `center + t·ray`.
    pub ray: LatticePoint,
    pub saddle: SaddlePoint,
    pub radii: Vec<f64>,
    /// `|u(x)|` at the sample points.
    pub amplitude: Vec<f64>,
    /// `|u(x)| |x|^{1/2}`.
    pub scaled_amplitude: Vec<f64>,
    /// `|u(x + e_j)/u(x) - e^{i ξ*·e_j}|` for `j = 1, 2`.
    pub phase_error: [Vec<f64>; 2],
    /// Least-squares slope of `log |u|` against `log |x|`.
    pub decay_exponent: f64,
    /// Least-squares slope of `log` phase error against `log |x|`.
    pub phase_slope: [f64; 2],
    /// Means of the phase errors over consecutive blocks of samples.
    pub phase_block_means: [Vec<f64>; 2],
}

impl RayReport {
    /// Whether the block means of both phase errors strictly decrease.
    pub fn phase_decreasing(&self) -> bool {
        self.phase_block_means
            .iter()
            .all(|m| m.windows(2).all(|w| w[1] < w[0]))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiationReport {
    pub k: f64,
    pub center: LatticePoint,
    pub radius_range: (f64, f64),
    pub rays: Vec<RayReport>,
}

impl RadiationReport {
    /// Largest `|exponent + 1/2|` over the rays.
    pub fn worst_exponent_error(&self) -> f64 {
        self.rays
            .iter()
            .map(|r| (r.decay_exponent + 0.5).abs())
            .fold(0.0, f64::max)
    }

    pub fn phase_decreasing(&self) -> bool {
        self.rays.iter().all(RayReport::phase_decreasing)
    }

    /// Decay exponents within `tol` of `-1/2` and decreasing phase errors.
    pub fn passes(&self, tol: f64) -> bool {
        !self.rays.is_empty() && self.worst_exponent_error() <= tol && self.phase_decreasing()
    }
}

/// Minimum number of samples per ray.
pub const MIN_RAY_SAMPLES: usize = 8;
/// Number of blocks in the phase-error trend test.
pub const TREND_BLOCKS: usize = 4;

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn block_means(v: &[f64], blocks: usize) -> Vec<f64> {
    let n = v.len();
    (0..blocks)
        .map(|b| {
            let (lo, hi) = (b * n / blocks, (b + 1) * n / blocks);
            v[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

fn ray_points(ray: LatticePoint, r_min: f64, r_max: f64) -> Vec<LatticePoint> {
    let len = ray.coord_norm();
    let t0 = (r_min / len).ceil() as i64;
    let t1 = (r_max / len).floor() as i64;
    (t0.max(1)..=t1).map(|t| t * ray).collect()
}

/// Samples `u` along each ray `c + t·d`, `r_min <= |t·d| <= r_max`, and
/// measures amplitude decay and neighbour phase ratios. Radii and
/// directions are taken relative to `center`.
pub fn check_radiation<E: std::fmt::Display>(
    u: impl Fn(LatticePoint) -> std::result::Result<Complex64, E>,
    center: LatticePoint,
    rays: &[LatticePoint],
    radii: (f64, f64),
    k: f64,
) -> Result<RadiationReport> {
    let field = |x| u(x).map_err(|e| RadiationError::Field(e.to_string()));
    let e = [Direction::new(1).unwrap(), Direction::new(2).unwrap()];
    let mut reports = Vec::with_capacity(rays.len());
    for &ray in rays {
        if ray == LatticePoint::ORIGIN {
            return Err(RadiationError::InvalidParameter("zero ray direction".into()));
        }
        let points = ray_points(ray, radii.0, radii.1);
        if points.len() < MIN_RAY_SAMPLES {
            return Err(RadiationError::InsufficientSamples {
                ray,
                found: points.len(),
                needed: MIN_RAY_SAMPLES,
            });
        }
        let saddle = solve_dispersion(ray.coord_angle(), k)?;
        let targets = e.map(|j| Complex64::from_polar(1.0, saddle.phase(j)));
        let mut r = Vec::new();
        let mut amplitude = Vec::new();
        let mut phase_error = [Vec::new(), Vec::new()];
        for x in &points {
            let ux = field(center + *x)?;
            r.push(x.coord_norm());
            amplitude.push(ux.norm());
            for s in 0..2 {
                let ratio = field(center + *x + e[s].offset())? / ux;
                phase_error[s].push((ratio - targets[s]).norm());
            }
        }
        let log_r: Vec<f64> = r.iter().map(|v| v.ln()).collect();
        let log_a: Vec<f64> = amplitude.iter().map(|v| v.ln()).collect();
        let decay_exponent = slope(&log_r, &log_a);
        let phase_slope = [0, 1].map(|s| {
            let log_e: Vec<f64> = phase_error[s].iter().map(|v| v.ln()).collect();
            slope(&log_r, &log_e)
        });
        let phase_block_means = [0, 1].map(|s| block_means(&phase_error[s], TREND_BLOCKS));
        let scaled_amplitude = amplitude.iter().zip(&r).map(|(a, r)| a * r.sqrt()).collect();
        reports.push(RayReport {
            ray,
            saddle,
            radii: r,
            amplitude,
            scaled_amplitude,
            phase_error,
            decay_exponent,
            phase_slope,
            phase_block_means,
        });
    }
    Ok(RadiationReport {
        k,
        center,
        radius_range: radii,
        rays: reports,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldEstimate {
    /// Extrapolated `u_∞` in the direction of the ray.
    pub value: Complex64,
    /// `-u(x) |x|^{1/2} e^{-i ξ*·x}` at each sampled radius.
    pub samples: Vec<(f64, Complex64)>,
    /// `|q(r_{i+1}) - q(r_i)|` between consecutive samples.
    pub differences: Vec<f64>,
}

/// Estimates the far-field pattern along the ray `center + t·ray` from
/// samples near the given radii, extrapolating the last two under a
/// `q(r) = u_∞ + c/r` model. The phase reference is `center`.
///
/// With three or more radii the successive differences must shrink.
pub fn far_field_estimate<E: std::fmt::Display>(
    u: impl Fn(LatticePoint) -> std::result::Result<Complex64, E>,
    center: LatticePoint,
    ray: LatticePoint,
    radii: &[f64],
    k: f64,
) -> Result<FarFieldEstimate> {
    if ray == LatticePoint::ORIGIN {
        return Err(RadiationError::InvalidParameter("zero ray direction".into()));
    }
    if radii.len() < 2 {
        return Err(RadiationError::InsufficientSamples {
            ray,
            found: radii.len(),
            needed: 2,
        });
    }
    let saddle = solve_dispersion(ray.coord_angle(), k)?;
    let len = ray.coord_norm();
    let mut samples = Vec::with_capacity(radii.len());
    for r in radii {
        let t = (r / len).round().max(1.0) as i64;
        let x = t * ray;
        let ux = u(center + x).map_err(|e| RadiationError::Field(e.to_string()))?;
        let phase = saddle.xi1 * x.x1 as f64 + saddle.xi2 * x.x2 as f64;
        let rx = x.coord_norm();
        samples.push((rx, -ux * rx.sqrt() * Complex64::from_polar(1.0, -phase)));
    }
    let differences: Vec<f64> = samples.windows(2).map(|w| (w[1].1 - w[0].1).norm()).collect();
    let scale = samples.iter().map(|s| s.1.norm()).fold(0.0, f64::max);
    if differences.windows(2).any(|w| w[1] > w[0] && w[1] > 1e-12 * scale.max(1e-300)) {
        return Err(RadiationError::NonConvergent { differences });
    }
    let (r1, q1) = samples[samples.len() - 2];
    let (r2, q2) = samples[samples.len() - 1];
    let value = if r2 == r1 { q2 } else { (q2 * r2 - q1 * r1) / (r2 - r1) };
    Ok(FarFieldEstimate {
        value,
        samples,
        differences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::green::{EngineConfig, GreenEngine, GreenError};
    use crate::lattice::{enumerate_boundary, hexagon_window};
    use std::sync::OnceLock;

    fn lp(x1: i64, x2: i64) -> LatticePoint {
        LatticePoint::new(x1, x2)
    }

    const RT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn diagonal_direction() {
        let sp = solve_dispersion(FRAC_PI_4, RT2).unwrap();
        assert!((sp.xi1 - PI / 3.0).abs() < 1e-10);
        assert!((sp.xi2 - PI / 3.0).abs() < 1e-10);
        assert!((sp.zeta - RT2 / (2.0 * 3f64.sqrt())).abs() < 1e-10);
    }

    #[test]
    fn axis_direction() {
        let sp = solve_dispersion(0.0, RT2).unwrap();
        assert!((sp.xi1 - 2.0 * sp.xi2).abs() < 1e-10);
        assert!((sp.xi2.cos() - (7f64.sqrt() - 1.0) / 2.0).abs() < 1e-10);
    }

    #[test]
    fn residuals_and_positivity_around_the_circle() {
        for k in [0.5, 1.0, RT2, 2.0, 2.5, 2.8] {
            for i in 0..64 {
                let alpha = TAU * i as f64 / 64.0;
                let sp = solve_dispersion(alpha, k).unwrap();
                assert!(sp.residual() <= DISPERSION_TOLERANCE, "α={alpha} k={k}");
                assert!(sp.zeta > 0.0);
            }
        }
    }

    #[test]
    fn continuity() {
        for alpha in [0.1, 1.0, 2.5, 4.0, 6.0] {
            let a = solve_dispersion(alpha, RT2).unwrap();
            let b = solve_dispersion(alpha + 1e-6, RT2).unwrap();
            assert!((a.xi1 - b.xi1).abs() < 1e-5 && (a.xi2 - b.xi2).abs() < 1e-5);
        }
    }

    #[test]
    fn swap_symmetry() {
        for alpha in [0.0, 0.3, 1.2, 2.0, 3.5, 5.0] {
            let a = solve_dispersion(alpha, 2.5).unwrap();
            let b = solve_dispersion(FRAC_PI_2 - alpha, 2.5).unwrap();
            assert!((a.xi1 - b.xi2).abs() < 1e-10 && (a.xi2 - b.xi1).abs() < 1e-10);
            assert!((a.mu() - b.mu()).abs() < 1e-10);
        }
    }

    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn zeta_on_diagonal() {
        let z = zeta_boundary(lp(3, 3), Direction::new(1).unwrap(), RT2).unwrap();
        let expected = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -PI / 3.0);
        assert!((z - expected).norm() < 1e-10);
    }

    #[test]
    fn zeta_has_positive_imaginary_part_on_hexagons() {
        for k in [1.0, RT2, 2.5] {
            for n in [1, 2, 7, 30] {
                let en = enumerate_boundary(&hexagon_window(n)).unwrap();
                for i in 0..en.len() {
                    for j in en.sides(i) {
                        let z = zeta_boundary(en.point(i), *j, k).unwrap();
                        assert!(z.im > 0.0, "k={k} y={} j={j}", en.point(i));
                    }
                }
            }
        }
    }

    fn engine() -> &'static GreenEngine {
        static E: OnceLock<GreenEngine> = OnceLock::new();
        E.get_or_init(|| GreenEngine::build(EngineConfig::new(RT2).n_max(130)).unwrap())
    }

    #[test]
    fn green_function_radiates() {
        let g = engine();
        let z = lp(1, -2);
        let rays = [lp(1, 0), lp(0, 1), lp(1, 1), lp(-1, 2), lp(-1, -1), lp(2, -1)];
        let report = check_radiation(|x| g.green(x - z), z, &rays, (20.0, 80.0), RT2).unwrap();
        assert!(report.worst_exponent_error() <= 0.05, "{}", report.worst_exponent_error());
        assert!(report.phase_decreasing());
    }

    #[test]
    fn constant_field_fails_decay() {
        let report =
            check_radiation(|_| Ok::<_, GreenError>(Complex64::new(1.0, 0.0)), LatticePoint::ORIGIN, &[lp(1, 0)], (20.0, 80.0), RT2)
                .unwrap();
        assert!(report.rays[0].decay_exponent.abs() < 1e-12);
        assert!(!report.passes(0.05));
    }

    #[test]
    fn too_few_samples() {
        let r = check_radiation(|_| Ok::<_, GreenError>(Complex64::new(1.0, 0.0)), LatticePoint::ORIGIN, &[lp(5, 5)], (20.0, 40.0), RT2);
        assert!(matches!(r, Err(RadiationError::InsufficientSamples { .. })));
    }

    #[test]
    fn far_field_of_zero() {
        let f = far_field_estimate(|_| Ok::<_, GreenError>(Complex64::new(0.0, 0.0)), LatticePoint::ORIGIN, lp(1, 0), &[20.0, 40.0], RT2)
            .unwrap();
        assert_eq!(f.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn far_field_of_green_settles() {
        let g = engine();
        let u = |x: LatticePoint| g.green(x);
        for ray in [lp(1, 0), lp(1, 1), lp(-2, 1)] {
            let f = far_field_estimate(u, LatticePoint::ORIGIN, ray, &[20.0, 40.0, 80.0], RT2).unwrap();
            let q = f.samples[1].1.norm();
            // remainder is O(1/R)
            assert!(f.differences[0] < 2.0 * q / 20.0 * 2.0, "{f:?}");
            assert!(f.differences[1] < f.differences[0]);
        }
    }

    #[test]
    fn rejects_bad_wave_numbers() {
        assert!(solve_dispersion(0.0, 3.0).is_err());
        assert!(solve_dispersion(0.0, 0.0).is_err());
    }
}
