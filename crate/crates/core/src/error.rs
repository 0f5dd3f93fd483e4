use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants are grouped by how a caller is expected to react: bad input,
/// resource limits, and numerical breakdown.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix dimension {dim} exceeds the configured cap {cap}")]
    Resource { dim: usize, cap: usize },
    #[error("undefined value: {0}")]
    UndefinedValue(String),
    #[error("base energy lies within {distance:.3e} of the band trajectory")]
    IllConditioned { distance: f64 },
    #[error("winding residual {residual:.3e} after {samples} samples; refine the path sampling")]
    NeedsRefinement { residual: f64, samples: usize },
    #[error("only {accepted} of {total} stripe energies satisfied the GBZ condition")]
    GbzAcceptance { accepted: usize, total: usize },
    #[error("band selection failed: {0}")]
    BandSelection(String),
    #[error("force has no rational Bloch period: {0}")]
    NoPeriod(String),
    #[error("time step {dt:.3e} violates the stability guard (dt * radius = {product:.3e} >= 0.1)")]
    StepSize { dt: f64, product: f64 },
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("potential is not a double well: {0}")]
    NotDoubleWell(String),
    #[error("non-positive curvature at the expansion point: {0}")]
    SaddlePoint(String),
    #[error("initial overlap {0:.3} is too large for the orthogonalization to converge")]
    DivergenceRisk(f64),
    #[error("quadrature not converged: couplings changed by {0:.3e} between resolutions")]
    Resolution(f64),
}

impl Error {
    /// True for errors caused by the caller's input rather than by numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidGeometry(_) | Error::InvalidInput(_) | Error::NotDoubleWell(_)
        )
    }
}
