use faer::Mat;
use num_complex::Complex64;

use super::{Cell, GeometryMask, HoppingParams, Momentum};
use crate::linalg::CsrMatrix;

/// One hopping term: the block `T_d` placed at `(r, r + d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hop {
    pub d: (i64, i64),
    /// Row-major `orbitals x orbitals` block.
    pub block: Vec<Complex64>,
}

/// Translation-invariant tight-binding model: on-site block plus a complete
/// list of hoppings (Hermitian partners included explicitly, so that
/// non-reciprocal models fit the same structure).
#[derive(Clone, Debug, PartialEq)]
pub struct HoppingTable {
    pub orbitals: usize,
    pub onsite: Vec<Complex64>,
    pub hops: Vec<Hop>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl HoppingTable {
    /// Real-space couplings of the `sp` ladder.
    pub fn sp_ladder(p: &HoppingParams) -> Self {
        let tx = [c(-p.t_s, 0.0), c(-p.t_sp, 0.0), c(p.t_sp, 0.0), c(p.t_p, 0.0)];
        let txy = [c(0.0, 0.0), c(0.0, 0.0), c(p.t_sp_prime, 0.0), c(0.0, 0.0)];
        let neg = |b: [Complex64; 4]| b.map(|z| -z);
        let hops = vec![
            Hop { d: (1, 0), block: tx.to_vec() },
            Hop { d: (-1, 0), block: adjoint2(tx).to_vec() },
            Hop { d: (1, 1), block: txy.to_vec() },
            Hop { d: (-1, 1), block: neg(txy).to_vec() },
            Hop { d: (-1, -1), block: adjoint2(txy).to_vec() },
            Hop { d: (1, -1), block: neg(adjoint2(txy)).to_vec() },
        ];
        let onsite = vec![c(0.0, 0.0), c(0.0, -p.delta_y), c(0.0, p.delta_y), c(0.0, -p.gamma)];
        Self { orbitals: 2, onsite, hops }
    }

    /// `Σ_d T_d e^{i k·d}` plus the on-site block.
    pub fn bloch(&self, k: Momentum) -> Mat<Complex64> {
        let n = self.orbitals;
        let mut m = Mat::from_fn(n, n, |i, j| self.onsite[i * n + j]);
        for hop in &self.hops {
            let phase = Complex64::from_polar(1.0, k.kx * hop.d.0 as f64 + k.ky * hop.d.1 as f64);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += hop.block[i * n + j] * phase;
                }
            }
        }
        m
    }
}

fn adjoint2(b: [Complex64; 4]) -> [Complex64; 4] {
    [b[0].conj(), b[2].conj(), b[1].conj(), b[3].conj()]
}

/// Sparse real-space Hamiltonian together with the mask that indexes it.
/// Row `cell * orbitals + alpha` belongs to orbital `alpha` of mask cell `cell`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSpaceHamiltonian {
    pub matrix: CsrMatrix,
    pub orbitals: usize,
    pub mask: GeometryMask,
}

impl RealSpaceHamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Cell coordinates of matrix row `i`.
    pub fn cell_of_row(&self, i: usize) -> Cell {
        self.mask.cells()[i / self.orbitals]
    }
}

/// Open-boundary assembly: bonds leaving the mask are dropped.
pub fn build_real_space(table: &HoppingTable, mask: &GeometryMask) -> RealSpaceHamiltonian {
    assemble(table, mask, |cell| mask.index_of(cell))
}

/// Assembly on an `lx x ly` torus; the mask is the full rectangle.
pub fn build_periodic(table: &HoppingTable, lx: usize, ly: usize) -> RealSpaceHamiltonian {
    let mask = GeometryMask::rectangle(lx, ly);
    let (wx, wy) = (lx as i64, ly as i64);
    let lookup = |(x, y): Cell| Some((y.rem_euclid(wy) * wx + x.rem_euclid(wx)) as usize);
    assemble(table, &mask, lookup)
}

fn assemble(
    table: &HoppingTable,
    mask: &GeometryMask,
    lookup: impl Fn(Cell) -> Option<usize>,
) -> RealSpaceHamiltonian {
    let n = table.orbitals;
    let mut triplets = Vec::with_capacity(mask.len() * n * n * (1 + table.hops.len()));
    for (i, &(x, y)) in mask.cells().iter().enumerate() {
        for a in 0..n {
            for b in 0..n {
                triplets.push((i * n + a, i * n + b, table.onsite[a * n + b]));
            }
        }
        for hop in &table.hops {
            let Some(j) = lookup((x + hop.d.0, y + hop.d.1)) else { continue };
            for a in 0..n {
                for b in 0..n {
                    let v = hop.block[a * n + b];
                    if v != Complex64::new(0.0, 0.0) {
                        triplets.push((i * n + a, j * n + b, v));
                    }
                }
            }
        }
    }
    RealSpaceHamiltonian {
        matrix: CsrMatrix::from_triplets(mask.len() * n, triplets),
        orbitals: n,
        mask: mask.clone(),
    }
}
