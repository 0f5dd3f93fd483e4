//! One-dimensional generalized Brillouin zones along the oblique directions.
//!
//! With `k± = (kx ± ky)/2` and `β± = e^{ik±}`, a lattice displacement `d`
//! contributes `β+^{dx+dy} β-^{dx-dy}`. Fixing one of the two variables turns
//! the Bloch matrix into a Laurent polynomial in the other, whose
//! determinant `f(β, E)` spans powers `-3..=3`.

mod charpoly;
mod kappa;
mod poly;
mod scan;
mod slice;

pub use charpoly::{
    char_poly, char_poly_along, expanded_char_poly, oblique_bloch, oblique_blocks, stripe_hamiltonian, Oblique,
};
pub use kappa::{kappa_map, kappa_map_along, KappaField};
pub use poly::{middle_gap, polynomial_roots, LaurentPoly};
pub use scan::{straight_direction_winding_scan, PathWinding, SkinPhase, WindingScan, SCAN_MOMENTA};
pub use slice::{gbz_slice, gbz_slice_along, GbzPoint, GbzSlice, MIN_ACCEPTED_SHARE, ROOT_TOLERANCE};
