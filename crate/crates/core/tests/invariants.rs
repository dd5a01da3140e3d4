use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;
use trihelm::cli::{parse_config, RunConfig};
use trihelm::green::symmetry::{canonicalize, orbit};
use trihelm::green::{EngineConfig, GreenEngine};
use trihelm::lattice::{embed, LatticePoint};
use trihelm::radiation::solve_dispersion;
use trihelm::solver::{BoundaryData, Geometry, Problem, ProblemSpec, Window};

fn engine() -> &'static GreenEngine {
    static ENGINE: OnceLock<GreenEngine> = OnceLock::new();
    ENGINE.get_or_init(|| GreenEngine::build(EngineConfig::new(1.7).n_max(40)).unwrap())
}

fn point(r: i64) -> impl Strategy<Value = LatticePoint> {
    (-r..=r, -r..=r).prop_map(|(a, b)| LatticePoint::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hex_norm_is_embedded_hexagon_radius(p in point(50)) {
        let (x, y) = embed(p);
        let by_angle = (0..6)
            .map(|i| {
                let t = std::f64::consts::PI / 3.0 * i as f64 + std::f64::consts::PI / 6.0;
                (x * t.cos() + y * t.sin()).abs()
            })
            .fold(0.0, f64::max);
        prop_assert!((by_angle * 2.0 / 3f64.sqrt() - p.hex_norm() as f64).abs() < 1e-9);
    }

    #[test]
    fn green_is_constant_on_orbits(p in point(20)) {
        let g = engine().green(p).unwrap();
        for q in orbit(p) {
            prop_assert_eq!(engine().green(q).unwrap(), g);
            prop_assert_eq!(canonicalize(q), canonicalize(p));
        }
    }

    #[test]
    fn dispersion_residual_is_small(alpha in 0.0..std::f64::consts::TAU, k in 0.2..2.7f64) {
        let s = solve_dispersion(alpha, k).unwrap();
        prop_assert!(s.residual() < 1e-10, "residual {}", s.residual());
        prop_assert!(s.mu() > 0.0);
    }

    #[test]
    fn config_round_trips(k in 0.3..2.7f64, eps in 1e-8..1e-2f64, re in -5.0..5.0f64, im in -5.0..5.0f64) {
        let text = format!(
            "case = \"I\"\nk = {k}\neps = {eps}\nboundary = [[0, 0], [1, 0]]\n[data]\nconstant = [{re}, {im}]\n"
        );
        let c: RunConfig = parse_config(&text).unwrap();
        prop_assert_eq!(parse_config(&c.to_toml()).unwrap(), c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn field_is_linear_in_data(a in -3.0..3.0f64, b in -3.0..3.0f64, x in point(12)) {
        let geometry = Geometry::CaseTwo {
            hole: [(2, 2), (3, 2), (3, 3)].map(LatticePoint::from).into(),
            boundary: [(2, 1), (3, 1), (4, 1), (4, 2), (4, 3), (3, 4), (2, 4), (2, 3), (1, 3), (1, 2)]
                .map(LatticePoint::from)
                .into(),
        };
        let spec = |c: Complex64| {
            ProblemSpec::new(geometry.clone(), 2f64.sqrt(), BoundaryData::Constant(c), Window::square(-12, 12))
        };
        let one = Problem::prepare(spec(Complex64::new(1.0, 0.0))).unwrap();
        let scaled = one.with_data(BoundaryData::Constant(Complex64::new(a, b))).unwrap();
        prop_assume!(!one.is_hole(x));
        let u1 = one.field_at(&one.solve().unwrap().phi, x).unwrap();
        let us = scaled.field_at(&scaled.solve().unwrap().phi, x).unwrap();
        prop_assert!((us - Complex64::new(a, b) * u1).norm() < 1e-10 * (1.0 + us.norm()));
    }
}
