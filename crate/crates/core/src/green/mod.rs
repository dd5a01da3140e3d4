//! Radiating Green's function of `Δ_d + k²` on the triangular lattice.

mod engine;
pub mod oracle;
pub mod sparse;
pub mod symmetry;

use thiserror::Error;

use crate::lattice::LatticePoint;

pub use engine::{
    helmholtz_residual, Absorber, EngineConfig, GreenEngine, Seed, DEFAULT_EPS, SINGULAR_RCOND,
};
pub use oracle::{contour_oracle, green_quadrature_oracle, oracle_limit, trapezoid_oracle};
pub use sparse::{sparse_matrices, SparseMatrix, SparseTriple};
pub use symmetry::canonicalize;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GreenError {
    #[error("propagation step {0} is numerically singular")]
    SingularStep(usize),
    #[error("{point} is at graph distance {distance}, beyond the truncation N_max = {n_max}")]
    OutOfRange {
        point: LatticePoint,
        distance: usize,
        n_max: usize,
    },
    #[error("quadrature did not reach tolerance {tol:e} at ε = {eps:e}")]
    ToleranceNotReached { tol: f64, eps: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
