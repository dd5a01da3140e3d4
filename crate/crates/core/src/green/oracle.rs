//! Brillouin-zone quadrature for the damped Green's function
//!
//! ```text
//! G(x) = 1/(4π²) ∬_{[-π,π]²} e^{i x·ξ} / σ(ξ; λ) dξ,
//! σ(ξ; λ) = λ - 6 + 2cos ξ1 + 2cos ξ2 + 2cos(ξ1 - ξ2),   λ = k² + iε.
//! ```
//!
//! Two independent routes are provided. [`trapezoid_oracle`] is the
//! tensor-product trapezoid rule with grid doubling; it converges
//! geometrically but the rate is proportional to `ε`, so it is only
//! practical for `ε` of order `1e-2` and above. [`contour_oracle`] does the
//! `ξ2` integral exactly by residues and integrates the remaining smooth
//! function of `ξ1` with adaptive Gauss–Kronrod, which stays cheap for
//! small `ε`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::GreenError;
use crate::lattice::LatticePoint;

/// Symbol of `Δ_d + λ`.
pub fn sigma(xi1: f64, xi2: f64, lambda: Complex64) -> Complex64 {
    lambda - 6.0 + 2.0 * xi1.cos() + 2.0 * xi2.cos() + 2.0 * (xi1 - xi2).cos()
}

const TRAPEZOID_START: usize = 64;
pub const TRAPEZOID_MAX_POINTS: usize = 8192;

/// Trapezoid rule on an `m × m` periodic grid.
pub fn trapezoid_sum(x: LatticePoint, lambda: Complex64, m: usize) -> Complex64 {
    let h = 2.0 * PI / m as f64;
    let cos: Vec<f64> = (0..m).map(|a| 2.0 * (a as f64 * h).cos()).collect();
    let phase: Vec<Complex64> = (0..m)
        .map(|a| Complex64::from_polar(1.0, a as f64 * h))
        .collect();
    let mi = m as i64;
    let mut total = Complex64::new(0.0, 0.0);
    for a in 0..m {
        let mut row = Complex64::new(0.0, 0.0);
        let base = lambda - 6.0 + cos[a];
        for b in 0..m {
            let s = base + cos[b] + cos[(a + m - b) % m];
            let idx = (x.x1 * a as i64 + x.x2 * b as i64).rem_euclid(mi) as usize;
            row += phase[idx] / s;
        }
        total += row;
    }
    total / (m * m) as f64
}

/// Trapezoid oracle; doubles the grid until successive values agree to `tol`.
pub fn trapezoid_oracle(
    x: LatticePoint,
    k: f64,
    eps: f64,
    tol: f64,
) -> Result<Complex64, GreenError> {
    let lambda = check_args(k, eps)?;
    let mut m = TRAPEZOID_START;
    let mut prev = trapezoid_sum(x, lambda, m);
    while m < TRAPEZOID_MAX_POINTS {
        m *= 2;
        let cur = trapezoid_sum(x, lambda, m);
        if (cur - prev).norm() < tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(GreenError::ToleranceNotReached { tol, eps })
}

fn check_args(k: f64, eps: f64) -> Result<Complex64, GreenError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(GreenError::InvalidParameter(format!(
            "quadrature needs ε > 0, got {eps}"
        )));
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(GreenError::InvalidParameter(format!("wave number {k}")));
    }
    Ok(Complex64::new(k * k, eps))
}

/// `(1/2π) ∫ e^{i x2 ξ2} / σ(ξ1, ξ2) dξ2` for `x2 >= 0`.
///
/// With `z = e^{iξ2}`, `σ = (P z² + a z + Q) / z` where `P = 1 + e^{-iξ1}`,
/// `Q = 1 + e^{iξ1}`, `a = λ - 6 + 2cos ξ1`. The roots multiply to `Q/P`,
/// which has modulus one, so exactly one lies inside the unit circle when
/// `ε > 0` and the integral is the residue there.
fn inner_integral(xi1: f64, x2: i64, lambda: Complex64) -> Complex64 {
    let p = Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, -xi1);
    let q = Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, xi1);
    let a = lambda - 6.0 + 2.0 * xi1.cos();
    let disc = (a * a - 4.0 * p * q).sqrt();
    // stable quadratic roots: big = -(a ± disc)/2 with the larger modulus
    let c1 = -(a + disc) / 2.0;
    let c2 = -(a - disc) / 2.0;
    let big = if c1.norm() >= c2.norm() { c1 } else { c2 };
    let small_root = q / big;
    let inside = if p.norm() > 0.0 {
        let other = big / p;
        if other.norm() < small_root.norm() {
            other
        } else {
            small_root
        }
    } else {
        small_root
    };
    inside.powi(x2 as i32) / (2.0 * p * inside + a)
}

// Gauss–Kronrod 7/15 nodes and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut values = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 7];
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (i, slot) in values.iter_mut().enumerate() {
        let dx = h * XGK[i];
        *slot = (f(c - dx), f(c + dx));
        let s = slot.0 + slot.1;
        kronrod += s * WGK[i];
        if i % 2 == 1 {
            gauss += s * WG[i / 2];
        }
    }
    // QUADPACK error scaling
    let mean = kronrod * 0.5;
    let mut asc = WGK[7] * (fc - mean).norm();
    for (i, (l, r)) in values.iter().enumerate() {
        asc += WGK[i] * ((l - mean).norm() + (r - mean).norm());
    }
    let asc = asc * h.abs();
    let mut err = ((kronrod - gauss) * h).norm();
    if asc > 0.0 && err > 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    (kronrod * h, err)
}

const MAX_INTERVALS: usize = 200_000;

/// Adaptive Gauss–Kronrod for a complex integrand, absolute tolerance.
pub fn adaptive_integral(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: f64,
) -> Option<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    let mut stack = vec![(a, b)];
    let mut intervals = 0;
    while let Some((lo, hi)) = stack.pop() {
        intervals += 1;
        if intervals > MAX_INTERVALS {
            return None;
        }
        let (value, err) = gauss_kronrod(&f, lo, hi);
        let budget = tol * (hi - lo) / (b - a);
        if err <= budget || hi - lo < 1e-13 * (b - a) {
            total += value;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi));
            stack.push((lo, mid));
        }
    }
    Some(total)
}

/// Semi-analytic oracle: exact inner integral, adaptive outer integral.
pub fn contour_oracle(
    x: LatticePoint,
    k: f64,
    eps: f64,
    tol: f64,
) -> Result<Complex64, GreenError> {
    let lambda = check_args(k, eps)?;
    // G(x) = G(-x): substitute ξ -> -ξ so that x2 >= 0
    let x = if x.x2 < 0 { -x } else { x };
    let x1 = x.x1 as f64;
    let f = |s: f64| Complex64::from_polar(1.0, x1 * s) * inner_integral(s, x.x2, lambda);
    adaptive_integral(f, -PI, PI, 2.0 * PI * tol)
        .map(|v| v / (2.0 * PI))
        .ok_or(GreenError::ToleranceNotReached { tol, eps })
}

/// Damping above which the trapezoid route is used by default.
pub const TRAPEZOID_MIN_EPS: f64 = 5e-2;

/// Quadrature value of the damped Green's function at `x`.
///
/// Uses the trapezoid route for `ε >= 0.05` and the contour route below.
pub fn green_quadrature_oracle(
    x: LatticePoint,
    k: f64,
    eps: f64,
    tol: f64,
) -> Result<Complex64, GreenError> {
    if eps >= TRAPEZOID_MIN_EPS {
        trapezoid_oracle(x, k, eps, tol)
    } else {
        contour_oracle(x, k, eps, tol)
    }
}

/// Richardson extrapolation `ε -> 0+` from `ε0, ε0/2, ε0/4`.
///
/// Assumes `G(ε) = G(0+) + c1 ε + c2 ε² + ...`.
pub fn oracle_limit(
    x: LatticePoint,
    k: f64,
    eps0: f64,
    tol: f64,
) -> Result<Complex64, GreenError> {
    let g1 = green_quadrature_oracle(x, k, eps0, tol)?;
    let g2 = green_quadrature_oracle(x, k, eps0 / 2.0, tol)?;
    let g4 = green_quadrature_oracle(x, k, eps0 / 4.0, tol)?;
    Ok((g1 - 6.0 * g2 + 8.0 * g4) / 3.0)
}
