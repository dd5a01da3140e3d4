pub mod green;
pub mod lattice;
pub mod linalg;
pub mod potentials;
pub mod solver;
pub mod radiation;
pub mod cli;
pub mod acceptance;
