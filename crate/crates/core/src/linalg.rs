//! Small linear-algebra helpers shared by the builders and solvers.

use faer::Mat;
use num_complex::Complex64;

use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Compressed sparse row matrix with complex entries.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl CsrMatrix {
    /// Assembles a square matrix from `(row, col, value)` triplets.
    /// Duplicate positions are summed; exact zeros are kept so that the
    /// sparsity pattern only depends on the bond structure.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Self {
        triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) outside {dim}x{dim}");
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { dim, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Iterates the stored entries of one row.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.row(i).find(|&(c, _)| c == j).map_or(ZERO, |(_, v)| v)
    }

    /// `y = A x`
    pub fn matvec_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = ZERO;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *yi = acc;
        }
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![ZERO; self.dim];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn to_dense(&self) -> Mat<Complex64> {
        let mut m = Mat::<Complex64>::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                m[(i, j)] += v;
            }
        }
        m
    }

    /// Largest entrywise deviation `max |A_ij - conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Largest absolute row sum, an upper bound on the spectral radius.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.row(i).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.vals.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// Eigenvalues of a small dense matrix. One- and two-dimensional matrices
/// use closed forms; anything larger goes through the dense solver.
pub fn small_eigenvalues(m: &Mat<Complex64>) -> Result<Vec<Complex64>> {
    match m.nrows() {
        0 => Ok(Vec::new()),
        1 => Ok(vec![m[(0, 0)]]),
        2 => {
            let (l0, l1) = eig2([[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]);
            Ok(vec![l0, l1])
        }
        _ => m
            .eigenvalues()
            .map_err(|e| Error::Numeric(format!("dense eigenvalue solve failed: {e:?}"))),
    }
}

/// Eigenpairs of a small dense matrix; eigenvectors have unit 2-norm.
pub fn small_eigenpairs(m: &Mat<Complex64>) -> Result<Vec<(Complex64, Vec<Complex64>)>> {
    match m.nrows() {
        0 => Ok(Vec::new()),
        1 => Ok(vec![(m[(0, 0)], vec![Complex64::new(1.0, 0.0)])]),
        2 => {
            let a = [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]];
            let (l0, l1) = eig2(a);
            Ok(vec![(l0, eigvec2(a, l0).to_vec()), (l1, eigvec2(a, l1).to_vec())])
        }
        n => {
            let evd = m
                .eigen()
                .map_err(|e| Error::Numeric(format!("dense eigendecomposition failed: {e:?}")))?;
            let s = evd.S().column_vector();
            let u = evd.U();
            Ok((0..n)
                .map(|j| {
                    let v: Vec<Complex64> = (0..n).map(|i| u[(i, j)]).collect();
                    (s[j], normalized(v))
                })
                .collect())
        }
    }
}

/// Closed-form eigenvalues of a 2x2 matrix, `+` root first.
pub fn eig2(a: [[Complex64; 2]; 2]) -> (Complex64, Complex64) {
    let half_tr = (a[0][0] + a[1][1]) * 0.5;
    let half_diff = (a[0][0] - a[1][1]) * 0.5;
    let disc = (half_diff * half_diff + a[0][1] * a[1][0]).sqrt();
    (half_tr + disc, half_tr - disc)
}

/// Unit eigenvector of a 2x2 matrix for a known eigenvalue.
pub fn eigvec2(a: [[Complex64; 2]; 2], lambda: Complex64) -> [Complex64; 2] {
    // Two candidate null vectors of (A - λ); keep the better conditioned one.
    let v1 = [a[0][1], lambda - a[0][0]];
    let v2 = [lambda - a[1][1], a[1][0]];
    let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
    let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
    let (v, n) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
    if n < 1e-300 {
        // A is (numerically) λ times the identity.
        return [Complex64::new(1.0, 0.0), ZERO];
    }
    let s = 1.0 / n.sqrt();
    [v[0] * s, v[1] * s]
}

pub fn normalized(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let n = norm(&v);
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
    v
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise modulus of a dense matrix.
pub fn max_abs(m: &Mat<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}
