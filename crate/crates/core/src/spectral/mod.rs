//! Non-Hermitian eigenanalysis and per-state localization diagnostics.

mod bands;
mod diagnostics;
mod eigen;
mod symmetry;
mod winding;

pub use bands::{band_path, BandPath, MomentumPath};
pub use diagnostics::{
    average_density, boundary_statistics, bulk_median_fd, fractional_dimension, BoundaryStats, DensityField, BOUNDARY_LAYERS,
    BULK_MIN_ABS_RE,
};
pub use eigen::{eigensolve, eigensolve_with_cap, ComplexSpectrum, DEFAULT_DIM_CAP};
pub use symmetry::{symmetry_residuals, SymmetryResiduals};
pub use winding::{
    bounding_grid, interior_base_points, total_winding_map, spectral_winding, spectral_winding_adaptive, total_winding,
    trajectory_centroid, MomentumLoop, Winding,
    MIN_WINDING_SAMPLES,
};
