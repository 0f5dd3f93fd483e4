//! Numerical laboratory for non-Hermitian tight-binding lattices.
//!
//! The crate is organised around the two-orbital `sp` ladder with orbital
//! dependent loss, plus two reference models used for validation:
//!
//! * [`lattice`] builds open-boundary geometries (square, rotated, diamond)
//!   and assembles Bloch and real-space Hamiltonians.
//! * [`spectral`] diagonalizes real-space matrices and computes localization
//!   diagnostics, symmetry residuals, spectral winding numbers and band paths.
//! * [`gbz`] computes one-dimensional generalized Brillouin zones along the
//!   oblique lattice directions.
//! * [`dynamics`] evolves wave packets under a static force and reconstructs
//!   complex band energies from their trajectories.
//! * [`models`] collects the model zoo behind a common descriptor.
//! * [`wannier`] derives tight-binding couplings from a continuum optical
//!   potential.
//!
//! Units: lattice constant 1 and `ħ = 1` everywhere except in [`wannier`],
//! which works in recoil units of the optical lattice.

pub mod dynamics;
pub mod error;
pub mod export;
pub mod gbz;
pub mod lattice;
pub mod linalg;
pub mod models;
pub mod spectral;
pub mod wannier;

pub use error::{Error, Result};
pub use num_complex::Complex64;
