//! Recursive evaluation of the radiating lattice Green's function.
//!
//! The canonical values are grouped into Manhattan shells
//! `V_n = (G(n,0), G(n-1,1), ...)`. Shells are linked by `V_n = A_n V_{n-1}`
//! with `A_n = [γ_n - β_n A_{n+1}]^{-1} α_n`, computed downward from a seed
//! `A_{N+1}`. Then `G(0,0) = 1 / (6 A_1 - 6 + λ)` and the shells are
//! propagated outward.
//!
//! The wave number enters as `λ = k² + iε`. With small `ε` the outgoing wave
//! barely decays before the truncation shell, and a zero seed acts as a
//! reflecting wall. The optional absorbing layer appends shells beyond
//! `N_max` in which the damping ramps up smoothly, so the wave is absorbed
//! before it reaches the seed. Shells `<= N_max` always see the physical `λ`.

use faer::Mat;
use num_complex::Complex64;

use super::sparse::{shell_len, sparse_matrices};
use super::symmetry::canonicalize;
use super::GreenError;
use crate::lattice::{neighborhood, LatticePoint};
use crate::linalg::{CMatrix, LuFactor};

/// Steps with a reciprocal condition estimate below this are singular.
pub const SINGULAR_RCOND: f64 = 1e-14;

pub const DEFAULT_EPS: f64 = 1e-6;

/// Initial propagation matrix `A_{N+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Seed {
    Zero,
    /// `c` times the rectangular identity.
    ScaledIdentity(Complex64),
}

impl Seed {
    /// The seed used at `k = 2`, where `γ_n` is singular.
    pub fn perturbed() -> Self {
        Seed::ScaledIdentity(Complex64::new(0.0, 1e-6))
    }
}

/// Damping ramp `ε_n = ε + strength · ((n - N_max) / shells)^power` on
/// the shells `N_max < n <= N_max + shells`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Absorber {
    pub shells: usize,
    pub strength: f64,
    pub power: i32,
}

impl Absorber {
    pub const NONE: Absorber = Absorber {
        shells: 0,
        strength: 0.0,
        power: 1,
    };

    fn damping(&self, depth: usize) -> f64 {
        if self.shells == 0 {
            return 0.0;
        }
        self.strength * (depth as f64 / self.shells as f64).powi(self.power)
    }
}

impl Default for Absorber {
    fn default() -> Self {
        Self {
            shells: 400,
            strength: 1.0,
            power: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub k: f64,
    pub eps: f64,
    pub n_max: usize,
    pub seed: Seed,
    pub absorber: Absorber,
}

impl EngineConfig {
    /// Defaults: `ε = 1e-6`, `N_max = 80`, zero seed, default absorber.
    pub fn new(k: f64) -> Self {
        Self {
            k,
            eps: DEFAULT_EPS,
            n_max: 80,
            seed: Seed::Zero,
            absorber: Absorber::default(),
        }
    }

    pub fn eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn seed(mut self, seed: Seed) -> Self {
        self.seed = seed;
        self
    }

    pub fn absorber(mut self, absorber: Absorber) -> Self {
        self.absorber = absorber;
        self
    }

    /// Truncation large enough to serve lookups up to graph distance
    /// `max_distance`.
    pub fn auto_n_max(max_distance: usize) -> usize {
        (max_distance + 20).max(80)
    }

    /// `λ = k² + iε`.
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(self.k * self.k, self.eps)
    }
}

/// Green's function values on all shells `0..=N_max`.
///
/// Immutable once built; lookups are pure.
#[derive(Debug, Clone)]
pub struct GreenEngine {
    config: EngineConfig,
    propagators: Vec<CMatrix>,
    shells: Vec<Vec<Complex64>>,
}

impl GreenEngine {
    pub fn build(config: EngineConfig) -> Result<Self, GreenError> {
        let EngineConfig {
            k,
            eps,
            n_max,
            seed,
            absorber,
        } = config;
        if !(k.is_finite() && k > 0.0 && k < 2.0 * 2f64.sqrt()) {
            return Err(GreenError::InvalidParameter(format!(
                "wave number {k} outside (0, 2√2)"
            )));
        }
        if !(eps.is_finite() && eps >= 0.0) {
            return Err(GreenError::InvalidParameter(format!("damping {eps} must be >= 0")));
        }
        if n_max < 1 {
            return Err(GreenError::InvalidParameter("N_max must be at least 1".into()));
        }
        let top = n_max + absorber.shells;
        let mut next = seed_matrix(seed, top + 1);
        let mut propagators = vec![CMatrix::zeros(0, 0); n_max + 1];
        for n in (1..=top).rev() {
            let damping = eps + if n > n_max { absorber.damping(n - n_max) } else { 0.0 };
            let lambda = Complex64::new(k * k, damping);
            let triple = sparse_matrices(n, lambda);
            // M = γ_n - β_n A_{n+1}
            let mut m = triple.gamma.to_dense();
            for &(i, c, b) in triple.beta.entries() {
                for j in 0..next.ncols() {
                    m[(i, j)] -= b * next[(c, j)];
                }
            }
            let lu = LuFactor::new(&m);
            if lu.rcond() < SINGULAR_RCOND {
                return Err(GreenError::SingularStep(n));
            }
            let a = lu.solve(&triple.alpha.to_dense());
            if n <= n_max {
                propagators[n] = a.clone();
            }
            next = a;
        }
        let lambda = config.lambda();
        let a1 = propagators[1][(0, 0)];
        let g00 = 1.0 / (6.0 * a1 - 6.0 + lambda);
        let mut shells = Vec::with_capacity(n_max + 1);
        shells.push(vec![g00]);
        for n in 1..=n_max {
            let a = &propagators[n];
            let prev = &shells[n - 1];
            let v: Vec<Complex64> = (0..a.nrows())
                .map(|i| (0..a.ncols()).map(|j| a[(i, j)] * prev[j]).sum())
                .collect();
            shells.push(v);
        }
        Ok(Self {
            config,
            propagators,
            shells,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn k(&self) -> f64 {
        self.config.k
    }

    pub fn n_max(&self) -> usize {
        self.config.n_max
    }

    /// `λ = k² + iε` of the equation `(Δ_d + λ) G = δ`.
    pub fn lambda(&self) -> Complex64 {
        self.config.lambda()
    }

    /// `A_n` for `1 <= n <= N_max`.
    pub fn propagator(&self, n: usize) -> &CMatrix {
        assert!(n >= 1 && n <= self.n_max(), "propagator index out of range");
        &self.propagators[n]
    }

    /// `V_n`; `V_0 = (G(0,0))`.
    pub fn shell(&self, n: usize) -> &[Complex64] {
        &self.shells[n]
    }

    pub fn g00(&self) -> Complex64 {
        self.shells[0][0]
    }

    pub fn green(&self, x: LatticePoint) -> Result<Complex64, GreenError> {
        let c = canonicalize(x);
        let n = (c.x1 + c.x2) as usize;
        if n > self.n_max() {
            return Err(GreenError::OutOfRange {
                point: x,
                distance: n,
                n_max: self.n_max(),
            });
        }
        Ok(self.shells[n][c.x2 as usize])
    }

    /// Largest graph distance a lookup may have.
    pub fn range(&self) -> usize {
        self.n_max()
    }

    /// `(Δ_d + λ) G(x) - δ_{x,0}`.
    pub fn stencil_defect(&self, x: LatticePoint) -> Result<Complex64, GreenError> {
        let mut acc = (self.lambda() - 6.0) * self.green(x)?;
        for y in neighborhood(x) {
            acc += self.green(y)?;
        }
        if x == LatticePoint::ORIGIN {
            acc -= 1.0;
        }
        Ok(acc)
    }

    /// Rebuilds with `N_max + extra` and returns the largest change of any
    /// value within graph distance `radius`.
    pub fn truncation_drift(&self, extra: usize, radius: usize) -> Result<f64, GreenError> {
        let bigger = GreenEngine::build(self.config.n_max(self.n_max() + extra))?;
        let radius = radius.min(self.n_max());
        let mut worst: f64 = 0.0;
        for n in 0..=radius {
            for (a, b) in self.shells[n].iter().zip(&bigger.shells[n]) {
                worst = worst.max((a - b).norm());
            }
        }
        Ok(worst)
    }
}

fn seed_matrix(seed: Seed, n: usize) -> CMatrix {
    let rows = shell_len(n);
    let cols = shell_len(n - 1);
    match seed {
        Seed::Zero => Mat::zeros(rows, cols),
        Seed::ScaledIdentity(c) => Mat::from_fn(rows, cols, |i, j| {
            if i == j {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        }),
    }
}

/// Largest stencil defect `|(Δ_d + λ) G(x) - δ_{x,0}|` over all `x` within
/// graph distance `radius`.
pub fn helmholtz_residual(engine: &GreenEngine, radius: usize) -> Result<f64, GreenError> {
    let r = radius as i64;
    let mut worst: f64 = 0.0;
    for x1 in -r..=r {
        for x2 in -r..=r {
            let x = LatticePoint::new(x1, x2);
            if x.hex_norm() <= r {
                worst = worst.max(engine.stencil_defect(x)?.norm());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(k: f64) -> GreenEngine {
        GreenEngine::build(EngineConfig::new(k).n_max(40).absorber(Absorber {
            shells: 120,
            strength: 1.0,
            power: 3,
        }))
        .unwrap()
    }

    #[test]
    fn origin_formula() {
        let e = small(2f64.sqrt());
        let a1 = e.propagator(1)[(0, 0)];
        let expected = 1.0 / (6.0 * a1 - 6.0 + e.lambda());
        assert_eq!(e.g00(), expected);
        assert_eq!(e.green(LatticePoint::ORIGIN).unwrap(), expected);
        // 6 G(1,0) - (6 - λ) G(0,0) = 1
        let r = 6.0 * e.green(LatticePoint::new(1, 0)).unwrap() - (6.0 - e.lambda()) * e.g00() - 1.0;
        assert!(r.norm() < 1e-13);
    }

    #[test]
    fn symmetric_lookups_share_storage() {
        let e = small(1.0);
        let g = e.green(LatticePoint::new(1, 0)).unwrap();
        assert_eq!(e.green(LatticePoint::new(0, 1)).unwrap(), g);
        assert_eq!(e.green(LatticePoint::new(-1, 1)).unwrap(), g);
    }

    #[test]
    fn shells_obey_propagators() {
        let e = small(2.5);
        for n in 1..=e.n_max() {
            assert_eq!(e.shell(n).len(), shell_len(n));
        }
    }

    #[test]
    fn residual_is_small_inside() {
        let e = small(2f64.sqrt());
        assert!(helmholtz_residual(&e, 20).unwrap() < 1e-12);
    }

    #[test]
    fn lookups_beyond_range_fail() {
        let e = small(1.0);
        assert!(e.green(LatticePoint::new(40, 0)).is_ok());
        assert!(matches!(
            e.green(LatticePoint::new(41, 0)),
            Err(GreenError::OutOfRange { distance: 41, .. })
        ));
        // (30, -25) has graph distance 30 even though |x1| + |x2| = 55
        assert!(e.green(LatticePoint::new(30, -25)).is_ok());
    }

    #[test]
    fn zero_seed_at_k_two_is_singular() {
        let cfg = EngineConfig::new(2.0).eps(0.0).n_max(30).absorber(Absorber::NONE);
        assert!(matches!(GreenEngine::build(cfg), Err(GreenError::SingularStep(30))));
        let cfg = cfg.seed(Seed::perturbed());
        let e = GreenEngine::build(cfg).unwrap();
        assert!(helmholtz_residual(&e, 10).unwrap() < 1e-8);
    }

    #[test]
    fn rejects_bad_parameters() {
        for k in [0.0, -1.0, 3.0, f64::NAN] {
            assert!(GreenEngine::build(EngineConfig::new(k)).is_err());
        }
        assert!(GreenEngine::build(EngineConfig::new(1.0).eps(-1.0)).is_err());
        assert!(GreenEngine::build(EngineConfig::new(1.0).n_max(0)).is_err());
    }
}
