use num_complex::Complex64;

use super::ComplexSpectrum;
use crate::lattice::{CellSet, GeometryMask};
use crate::{Error, Result};

/// `D[ψ] = -ln(Σ|ψ|⁴) / ln √N`, with `ψ` normalised internally.
pub fn fractional_dimension(state: &[Complex64], sites: usize) -> Result<f64> {
    let norm2: f64 = state.iter().map(|z| z.norm_sqr()).sum();
    if norm2 == 0.0 || !norm2.is_finite() {
        return Err(Error::UndefinedValue("fractional dimension of a zero vector".into()));
    }
    if sites < 2 {
        return Err(Error::UndefinedValue("fractional dimension needs at least two sites".into()));
    }
    let ipr: f64 = state.iter().map(|z| (z.norm_sqr() / norm2).powi(2)).sum();
    Ok(-ipr.ln() / (sites as f64).sqrt().ln())
}

/// Average eigenstate density per cell, normalised to total weight one.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityField {
    pub values: Vec<f64>,
}

impl DensityField {
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// `ρ̄(r) = Σ_{n,α} |ψ_{n,α,r}|² / N`, rescaled so the field sums to one.
pub fn average_density(spec: &ComplexSpectrum, mask: &GeometryMask) -> DensityField {
    let mut values = vec![0.0; mask.len()];
    for n in 0..spec.len() {
        for (acc, w) in values.iter_mut().zip(spec.cell_weights(n)) {
            *acc += w;
        }
    }
    let total: f64 = values.iter().sum();
    if total > 0.0 {
        values.iter_mut().for_each(|v| *v /= total);
    }
    DensityField { values }
}

/// Depth of the boundary shell used for `ρ_b`: the outermost two layers.
pub const BOUNDARY_LAYERS: usize = 2;
/// States with `|Re E|` below this are excluded from bulk-band statistics.
pub const BULK_MIN_ABS_RE: f64 = 0.5;

/// Median fractional dimension over the states with `|Re E| >= min_abs_re`.
pub fn bulk_median_fd(spec: &ComplexSpectrum, min_abs_re: f64) -> Result<f64> {
    let mut fd: Vec<f64> =
        (0..spec.len()).filter(|&i| spec.eigenvalues[i].re.abs() >= min_abs_re).map(|i| spec.fd[i]).collect();
    if fd.is_empty() {
        return Err(Error::UndefinedValue(format!("no states with |Re E| >= {min_abs_re}")));
    }
    fd.sort_by(f64::total_cmp);
    let n = fd.len();
    Ok(if n % 2 == 1 { fd[n / 2] } else { 0.5 * (fd[n / 2 - 1] + fd[n / 2]) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryStats {
    /// `ρ_b(n)`: weight of each state inside the shell.
    pub per_state: Vec<f64>,
    /// `ρ̄_b`: share of the average density inside the shell.
    pub mean: f64,
    /// `N_b`: number of states with `ρ_b > 1/2`.
    pub boundary_modes: usize,
}

pub fn boundary_statistics(spec: &ComplexSpectrum, shell: &CellSet) -> Result<BoundaryStats> {
    if shell.is_empty() {
        return Err(Error::InvalidInput("boundary shell is empty".into()));
    }
    let members: Vec<usize> = shell.indices().collect();
    let mut per_state = Vec::with_capacity(spec.len());
    let mut inside = 0.0;
    let mut total = 0.0;
    for n in 0..spec.len() {
        let w = spec.cell_weights(n);
        let b: f64 = members.iter().map(|&c| w[c]).sum();
        inside += b;
        total += w.iter().sum::<f64>();
        per_state.push(b);
    }
    let boundary_modes = per_state.iter().filter(|&&b| b > 0.5).count();
    Ok(BoundaryStats { per_state, mean: inside / total, boundary_modes })
}
