//! Geometries and Hamiltonian builders for the `sp` ladder.
//!
//! Hopping convention used throughout the crate: a term `T_d` attached to
//! displacement `d` fills the block `(r, r + d)` of the real-space matrix, so
//! the Bloch matrix is `H(k) = Σ_d T_d e^{i k·d}`.

mod bloch;
mod geometry;
mod hamiltonian;
mod params;

pub use bloch::{build_bloch, wrap_angle, BlochMatrix, Momentum};
pub use geometry::{boundary_shell, make_geometry, Cell, CellSet, GeometryMask, GeometrySpec, Shape};
pub use hamiltonian::{build_periodic, build_real_space, Hop, HoppingTable, RealSpaceHamiltonian};
pub use params::HoppingParams;
