use faer::Mat;
use num_complex::Complex64;

use super::diagnostics::fractional_dimension;
use crate::lattice::RealSpaceHamiltonian;
use crate::{Error, Result};

pub const DEFAULT_DIM_CAP: usize = 14_000;

/// Full right-eigenpair set of a real-space Hamiltonian.
#[derive(Clone, Debug)]
pub struct ComplexSpectrum {
    pub eigenvalues: Vec<Complex64>,
    /// Right eigenvectors as unit-norm columns, same order as `eigenvalues`.
    pub vectors: Mat<Complex64>,
    /// Fractional dimension of each state.
    pub fd: Vec<f64>,
    pub orbitals: usize,
}

impl ComplexSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn state(&self, n: usize) -> Vec<Complex64> {
        (0..self.vectors.nrows()).map(|i| self.vectors[(i, n)]).collect()
    }

    /// `|ψ_n|²` summed over orbitals, one entry per cell.
    pub fn cell_weights(&self, n: usize) -> Vec<f64> {
        let cells = self.vectors.nrows() / self.orbitals;
        (0..cells)
            .map(|c| (0..self.orbitals).map(|a| self.vectors[(c * self.orbitals + a, n)].norm_sqr()).sum())
            .collect()
    }
}

pub fn eigensolve(h: &RealSpaceHamiltonian) -> Result<ComplexSpectrum> {
    eigensolve_with_cap(h, DEFAULT_DIM_CAP)
}

/// Dense eigendecomposition, eigenvalues sorted lexicographically by
/// `(Re, Im)`. The fractional dimension uses the number of lattice cells as
/// the site count.
pub fn eigensolve_with_cap(h: &RealSpaceHamiltonian, cap: usize) -> Result<ComplexSpectrum> {
    let dim = h.dim();
    if dim > cap {
        return Err(Error::Resource { dim, cap });
    }
    if !h.matrix.all_finite() {
        return Err(Error::InvalidInput("Hamiltonian has non-finite entries".into()));
    }
    let dense = h.matrix.to_dense();
    let evd = dense
        .eigen()
        .map_err(|e| Error::Numeric(format!("eigendecomposition failed: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| s[a].re.total_cmp(&s[b].re).then(s[a].im.total_cmp(&s[b].im)));

    let eigenvalues: Vec<Complex64> = order.iter().map(|&j| s[j]).collect();
    let mut vectors = Mat::<Complex64>::zeros(dim, dim);
    for (col, &j) in order.iter().enumerate() {
        let norm = (0..dim).map(|i| u[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..dim {
            vectors[(i, col)] = u[(i, j)] / norm;
        }
    }
    let sites = h.mask.len();
    let fd = (0..dim)
        .map(|n| {
            let col: Vec<Complex64> = (0..dim).map(|i| vectors[(i, n)]).collect();
            fractional_dimension(&col, sites).unwrap_or(0.0)
        })
        .collect();
    Ok(ComplexSpectrum { eigenvalues, vectors, fd, orbitals: h.orbitals })
}
