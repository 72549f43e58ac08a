//! Deformed harmonic oscillator with position-dependent mass
//! m(x) = m0 / (1 + gamma x)^2.
//!
//! The library covers four connected layers of the same model:
//!
//! * [`classical`]: exact trajectories through a deformed phase, plus an
//!   independent RK4 integrator for cross-checks.
//! * [`spectrum`]: closed-form bound-state energies and eigenfunctions of
//!   the quantum model, together with their moments.
//! * [`susy`]: factorization of the Hamiltonian, the partner potential,
//!   shape-invariance ladder operators and the deformed algebra they close.
//! * [`coherent`]: annihilation-operator coherent states, their moments,
//!   uncertainty products, and exact time evolution.
//!
//! Everything analytic can be checked against [`oracle`], which solves the
//! mapped constant-mass problem by finite differences and evaluates matrix
//! elements by quadrature without using any closed-form result.

pub mod classical;
pub mod coherent;
pub mod error;
pub mod grid;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod special;
pub mod spectrum;
pub mod susy;
pub mod tridiag;

pub use error::{Error, Result};
pub use grid::{default_grid, Coordinate, DensityConvention, Grid, GridSpec, WaveFn};
pub use params::ModelParams;
