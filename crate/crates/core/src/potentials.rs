//! Difference layer potentials on a lattice boundary.
//!
//! For a density `φ` on the enumerated boundary `y_1, ..., y_m`:
//!
//! ```text
//! Vφ(x)  = Σ_y G(x - y) φ(y)
//! Wφ(x)  = Σ_y (Σ_{j ∈ sides(y)} T_j G(x - y) + δ_{x,y}) φ(y)
//! W'φ(x) = Σ_y Σ_{l ∈ sides(y)} (G(x - y) - G(x - y⁻_l)) φ(y)
//! ```
//!
//! where `T_j G(x - y) = G(x - y) - G(x - y + e_j)` is the outward
//! difference in the `y` variable and `y⁻_l = y - e_l`.
//!
//! Sums run in enumeration order and use compensated accumulation, so the
//! results are reproducible bit for bit.

use num_complex::Complex64;
use thiserror::Error;

use crate::green::{GreenEngine, GreenError};
use crate::lattice::{
    neighborhood, BoundaryEnumeration, Direction, LatticePoint, Region, SideFrame,
};
use crate::linalg::NeumaierSum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("{point} is not on side {direction}: {point} - e_{direction} is not interior")]
    SideMismatch {
        point: LatticePoint,
        direction: Direction,
    },
    #[error("operation needs sides taken with respect to a finite hole")]
    CaseMismatch,
    #[error("density has {got} values but the boundary has {expected} points")]
    DensityLength { expected: usize, got: usize },
    #[error("finite region expected")]
    NotFinite,
    #[error(transparent)]
    Green(#[from] GreenError),
}

type Result<T> = std::result::Result<T, PotentialError>;

fn check_len(enumeration: &BoundaryEnumeration, phi: &[Complex64]) -> Result<()> {
    if phi.len() != enumeration.len() {
        return Err(PotentialError::DensityLength {
            expected: enumeration.len(),
            got: phi.len(),
        });
    }
    Ok(())
}

/// Outward difference `u(y) - u(y - e_j)` on side `j` of `region`.
pub fn normal_derivative(
    u: impl Fn(LatticePoint) -> Complex64,
    region: &Region,
    y: LatticePoint,
    j: Direction,
) -> Result<Complex64> {
    let inner = y - j.offset();
    if !region.is_boundary(y) || !region.is_interior(inner) {
        return Err(PotentialError::SideMismatch {
            point: y,
            direction: j,
        });
    }
    Ok(u(y) - u(inner))
}

/// Single layer `Vφ(x) = Σ_i G(x - y_i) φ_i`, one term per boundary point.
pub fn single_layer(
    engine: &GreenEngine,
    enumeration: &BoundaryEnumeration,
    phi: &[Complex64],
    x: LatticePoint,
) -> Result<Complex64> {
    check_len(enumeration, phi)?;
    let mut acc = NeumaierSum::default();
    for (y, p) in enumeration.points().iter().zip(phi) {
        acc.add(engine.green(x - *y)? * p);
    }
    Ok(acc.value())
}

/// `Σ_i n_i G(x - y_i) φ_i`: the single layer counted once per side.
pub fn single_layer_with_sides(
    engine: &GreenEngine,
    enumeration: &BoundaryEnumeration,
    phi: &[Complex64],
    x: LatticePoint,
) -> Result<Complex64> {
    check_len(enumeration, phi)?;
    let mut acc = NeumaierSum::default();
    for (i, (y, p)) in enumeration.points().iter().zip(phi).enumerate() {
        let n = enumeration.side_count(i) as f64;
        acc.add(engine.green(x - *y)? * p * n);
    }
    Ok(acc.value())
}

fn sides_sum(
    engine: &GreenEngine,
    enumeration: &BoundaryEnumeration,
    i: usize,
    x: LatticePoint,
) -> Result<Complex64> {
    let y = enumeration.point(i);
    let gy = engine.green(x - y)?;
    let mut acc = NeumaierSum::default();
    for w in enumeration.inward(i) {
        acc.add(gy - engine.green(x - *w)?);
    }
    Ok(acc.value())
}

/// Double layer `Wφ(x)`; multi-side points contribute one difference per side.
pub fn double_layer(
    engine: &GreenEngine,
    enumeration: &BoundaryEnumeration,
    phi: &[Complex64],
    x: LatticePoint,
) -> Result<Complex64> {
    check_len(enumeration, phi)?;
    let mut acc = NeumaierSum::default();
    for (i, p) in phi.iter().enumerate() {
        let mut kernel = sides_sum(engine, enumeration, i, x)?;
        if enumeration.point(i) == x {
            kernel += 1.0;
        }
        acc.add(kernel * p);
    }
    Ok(acc.value())
}

/// `W'φ(x)` with sides taken with respect to the hole.
pub fn double_layer_complement(
    engine: &GreenEngine,
    enumeration: &BoundaryEnumeration,
    phi: &[Complex64],
    x: LatticePoint,
) -> Result<Complex64> {
    if enumeration.frame() != SideFrame::Finite {
        return Err(PotentialError::CaseMismatch);
    }
    check_len(enumeration, phi)?;
    let mut acc = NeumaierSum::default();
    for (i, p) in phi.iter().enumerate() {
        acc.add(sides_sum(engine, enumeration, i, x)? * p);
    }
    Ok(acc.value())
}

/// Values and outward differences of a lattice function on a boundary.
///
/// `normal[i][s]` belongs to the side `enumeration.sides(i)[s]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTrace {
    pub values: Vec<Complex64>,
    pub normal: Vec<Vec<Complex64>>,
}

impl BoundaryTrace {
    pub fn of(u: impl Fn(LatticePoint) -> Complex64, enumeration: &BoundaryEnumeration) -> Self {
        let mut values = Vec::with_capacity(enumeration.len());
        let mut normal = Vec::with_capacity(enumeration.len());
        for (i, y) in enumeration.points().iter().enumerate() {
            let uy = u(*y);
            values.push(uy);
            normal.push(enumeration.inward(i).iter().map(|w| uy - u(*w)).collect());
        }
        Self { values, normal }
    }
}

/// `Σ_y Σ_j (u(y) T_j G(x - y) - G(x - y) T_j u(y))` over boundary sides.
///
/// Equals `u(x)` at interior points of a finite region when `u` solves the
/// damped Helmholtz equation there.
pub fn green_representation(
    engine: &GreenEngine,
    enumeration: &BoundaryEnumeration,
    trace: &BoundaryTrace,
    x: LatticePoint,
) -> Result<Complex64> {
    check_len(enumeration, &trace.values)?;
    let mut acc = NeumaierSum::default();
    for (i, y) in enumeration.points().iter().enumerate() {
        let gy = engine.green(x - *y)?;
        for (w, tu) in enumeration.inward(i).iter().zip(&trace.normal[i]) {
            let tg = gy - engine.green(x - *w)?;
            acc.add(trace.values[i] * tg - gy * tu);
        }
    }
    Ok(acc.value())
}

/// The full representation with the volume term
/// `Σ_{y ∈ interior} G(x - y) (Δ_d + λ) u(y)`.
pub fn green_representation_with_source(
    engine: &GreenEngine,
    region: &Region,
    enumeration: &BoundaryEnumeration,
    u: impl Fn(LatticePoint) -> Complex64,
    x: LatticePoint,
) -> Result<Complex64> {
    let Region::Finite { interior, .. } = region else {
        return Err(PotentialError::NotFinite);
    };
    let trace = BoundaryTrace::of(&u, enumeration);
    let mut acc = NeumaierSum::default();
    acc.add(green_representation(engine, enumeration, &trace, x)?);
    let lambda = engine.lambda();
    for y in interior {
        let source = helmholtz(&u, *y, lambda);
        acc.add(engine.green(x - *y)? * source);
    }
    Ok(acc.value())
}

/// `Δ_d u(x) = Σ_{neighbours} u - 6 u(x)`.
pub fn laplacian(u: impl Fn(LatticePoint) -> Complex64, x: LatticePoint) -> Complex64 {
    let mut acc: NeumaierSum = neighborhood(x).into_iter().map(&u).collect();
    acc.add(-6.0 * u(x));
    acc.value()
}

/// `(Δ_d + λ) u(x)`.
pub fn helmholtz(
    u: impl Fn(LatticePoint) -> Complex64,
    x: LatticePoint,
    lambda: Complex64,
) -> Complex64 {
    laplacian(&u, x) + lambda * u(x)
}

/// `|Σ_{interior} (u Δv - v Δu) - Σ_{boundary sides} (u Tv - v Tu)|`.
pub fn green_second_identity_check(
    u: impl Fn(LatticePoint) -> Complex64,
    v: impl Fn(LatticePoint) -> Complex64,
    region: &Region,
) -> Result<f64> {
    let Region::Finite { interior, boundary } = region else {
        return Err(PotentialError::NotFinite);
    };
    let mut volume = NeumaierSum::default();
    for x in interior {
        volume.add(u(*x) * laplacian(&v, *x));
        volume.add(-v(*x) * laplacian(&u, *x));
    }
    let mut surface = NeumaierSum::default();
    for y in boundary {
        for d in Direction::ALL {
            let w = *y - d.offset();
            if interior.contains(&w) {
                let (uy, vy) = (u(*y), v(*y));
                surface.add(uy * (vy - v(w)));
                surface.add(-vy * (uy - u(w)));
            }
        }
    }
    Ok((volume.value() - surface.value()).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::green::{Absorber, EngineConfig};
    use crate::lattice::{enumerate_boundary, hexagon_window};
    use proptest::prelude::*;

    fn lp(x1: i64, x2: i64) -> LatticePoint {
        LatticePoint::new(x1, x2)
    }

    fn engine() -> GreenEngine {
        let cfg = EngineConfig::new(2f64.sqrt()).n_max(30).absorber(Absorber {
            shells: 100,
            strength: 1.0,
            power: 3,
        });
        GreenEngine::build(cfg).unwrap()
    }

    fn hole() -> Region {
        let interior = [lp(2, 2), lp(3, 2), lp(3, 3)];
        let boundary = [
            lp(2, 1),
            lp(3, 1),
            lp(4, 1),
            lp(4, 2),
            lp(4, 3),
            lp(3, 4),
            lp(2, 4),
            lp(2, 3),
            lp(1, 3),
            lp(1, 2),
        ];
        Region::finite(interior, boundary).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normal_derivative_basics() {
        let r = hexagon_window(3);
        let e1 = Direction::new(1).unwrap();
        let y = lp(3, 0);
        assert_eq!(normal_derivative(|_| c(2.0, 1.0), &r, y, e1).unwrap(), c(0.0, 0.0));
        assert_eq!(normal_derivative(|p| c(p.x1 as f64, 0.0), &r, y, e1).unwrap(), c(1.0, 0.0));
        let e4 = Direction::new(4).unwrap();
        assert!(matches!(
            normal_derivative(|_| c(0.0, 0.0), &r, y, e4),
            Err(PotentialError::SideMismatch { .. })
        ));
    }

    #[test]
    fn normal_derivative_of_green() {
        let g = engine();
        let r = hexagon_window(3);
        let z = lp(4, 0);
        let e1 = Direction::new(1).unwrap();
        let u = |p: LatticePoint| g.green(p - z).unwrap();
        let d = normal_derivative(u, &r, lp(3, 0), e1).unwrap();
        assert_eq!(d, g.green(lp(-1, 0)).unwrap() - g.green(lp(-2, 0)).unwrap());
    }

    #[test]
    fn point_density_gives_green() {
        let g = engine();
        let en = enumerate_boundary(&hole()).unwrap();
        let mut phi = vec![c(0.0, 0.0); en.len()];
        phi[3] = c(1.0, 0.0);
        let x = lp(-3, 5);
        assert_eq!(single_layer(&g, &en, &phi, x).unwrap(), g.green(x - en.point(3)).unwrap());
    }

    #[test]
    fn kronecker_term_on_boundary() {
        let g = engine();
        let en = enumerate_boundary(&hole()).unwrap();
        let i = en.index_of(lp(2, 1)).unwrap();
        let mut phi = vec![c(0.0, 0.0); en.len()];
        phi[i] = c(1.0, 0.0);
        let y = lp(2, 1);
        let expected = g.green(lp(0, 0)).unwrap() - g.green(lp(0, -1)).unwrap() + 1.0;
        assert!((double_layer(&g, &en, &phi, y).unwrap() - expected).norm() < 1e-15);
        // W' has no Kronecker term
        let w = double_layer_complement(&g, &en, &phi, y).unwrap();
        assert!((w - expected + 1.0).norm() < 1e-15);
    }

    #[test]
    fn complement_layer_needs_a_hole() {
        let g = engine();
        let plane = Region::cofinite([lp(0, 0), lp(1, 0)], []).unwrap();
        let en = enumerate_boundary(&plane).unwrap();
        let phi = vec![c(1.0, 0.0); en.len()];
        assert_eq!(
            double_layer_complement(&g, &en, &phi, lp(5, 5)),
            Err(PotentialError::CaseMismatch)
        );
    }

    #[test]
    fn combined_layer_expansion() {
        let g = engine();
        let en = enumerate_boundary(&hole()).unwrap();
        let phi: Vec<_> = (0..en.len()).map(|i| c(i as f64, 1.0 - i as f64)).collect();
        let eta = 0.7;
        let ieta = c(0.0, eta);
        for x in [lp(0, 0), lp(6, -2), lp(2, 1), lp(4, 2)] {
            let lhs = double_layer_complement(&g, &en, &phi, x).unwrap()
                + ieta * single_layer_with_sides(&g, &en, &phi, x).unwrap();
            let mut rhs = c(0.0, 0.0);
            for (i, p) in phi.iter().enumerate() {
                let n = en.side_count(i) as f64;
                rhs += (1.0 + ieta) * n * g.green(x - en.point(i)).unwrap() * p;
                for w in en.inward(i) {
                    rhs -= g.green(x - *w).unwrap() * p;
                }
            }
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn representation_reproduces_radiating_field() {
        let g = engine();
        let r = hexagon_window(4);
        let en = enumerate_boundary(&r).unwrap();
        let z = lp(7, -1);
        let u = |p: LatticePoint| g.green(p - z).unwrap();
        let trace = BoundaryTrace::of(u, &en);
        let Region::Finite { interior, .. } = &r else { unreachable!() };
        for x in interior {
            let rep = green_representation(&g, &en, &trace, *x).unwrap();
            assert!((rep - u(*x)).norm() < 1e-10, "{x}");
        }
    }

    #[test]
    fn representation_with_source() {
        let g = engine();
        let r = hexagon_window(3);
        let en = enumerate_boundary(&r).unwrap();
        let u = |p: LatticePoint| c(p.x1 as f64 * 0.3, (p.x2 * p.x1) as f64 - 1.0);
        for x in [lp(0, 0), lp(1, 1), lp(-2, 1)] {
            let rep = green_representation_with_source(&g, &r, &en, u, x).unwrap();
            assert!((rep - u(x)).norm() < 1e-10);
        }
    }

    #[test]
    fn second_identity_trivial_cases() {
        let r = hexagon_window(4);
        let u = |p: LatticePoint| c((p.x1 * p.x1) as f64, p.x2 as f64);
        assert_eq!(green_second_identity_check(u, u, &r).unwrap(), 0.0);
        let g = engine();
        let v = |p: LatticePoint| g.green(p - lp(1, 1)).unwrap();
        assert!(green_second_identity_check(|_| c(1.0, 0.0), v, &r).unwrap() < 1e-12);
    }

    fn field(seed: u64) -> impl Fn(LatticePoint) -> Complex64 {
        move |p: LatticePoint| {
            let h = (p.x1 * 7919 + p.x2 * 104_729) as u64 ^ seed;
            let a = (h.wrapping_mul(6_364_136_223_846_793_005) >> 11) as f64 / (1u64 << 53) as f64;
            let b = (h.wrapping_mul(1_442_695_040_888_963_407) >> 11) as f64 / (1u64 << 53) as f64;
            c(a - 0.5, b - 0.5)
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn second_identity_on_random_fields(n in 1u32..=8, s1 in any::<u64>(), s2 in any::<u64>()) {
            let r = hexagon_window(n);
            let res = green_second_identity_check(field(s1), field(s2), &r).unwrap();
            prop_assert!(res <= 1e-12, "residual {res}");
        }

        #[test]
        fn potentials_are_linear(a in -2.0..2.0f64, b in -2.0..2.0f64, s in any::<u64>(), x1 in -6i64..8, x2 in -6i64..8) {
            let g = engine();
            let en = enumerate_boundary(&hole()).unwrap();
            let f1 = field(s);
            let f2 = field(s.wrapping_add(1));
            let p1: Vec<_> = en.points().iter().map(|y| f1(*y)).collect();
            let p2: Vec<_> = en.points().iter().map(|y| f2(*y)).collect();
            let coef = c(a, b);
            let mix: Vec<_> = p1.iter().zip(&p2).map(|(u, v)| u + coef * v).collect();
            let x = lp(x1, x2);
            for op in [single_layer, double_layer, double_layer_complement] {
                let lhs = op(&g, &en, &mix, x).unwrap();
                let rhs = op(&g, &en, &p1, x).unwrap() + coef * op(&g, &en, &p2, x).unwrap();
                prop_assert!((lhs - rhs).norm() < 1e-12);
            }
        }

        #[test]
        fn layers_solve_helmholtz_inside(n in 2u32..=5, s in any::<u64>()) {
            let g = engine();
            let r = hexagon_window(n);
            let en = enumerate_boundary(&r).unwrap();
            let f = field(s);
            let phi: Vec<_> = en.points().iter().map(|y| f(*y)).collect();
            let lambda = g.lambda();
            let Region::Finite { interior, .. } = &r else { unreachable!() };
            for x in interior {
                let w = helmholtz(|p| double_layer(&g, &en, &phi, p).unwrap(), *x, lambda);
                prop_assert!(w.norm() < 1e-11, "W at {x}: {w}");
                let v = helmholtz(|p| single_layer(&g, &en, &phi, p).unwrap(), *x, lambda);
                prop_assert!(v.norm() < 1e-11, "V at {x}: {v}");
            }
        }
    }
}
