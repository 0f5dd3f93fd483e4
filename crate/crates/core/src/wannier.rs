//! Tight-binding couplings of the double-well optical lattice from
//! harmonic-oscillator orbitals.
//!
//! Units: `k_L = 1`, so the lattice period is `π` in both directions, and
//! energies are in recoil units `E_r = ħ²k²/2m = 1`. The kinetic operator is
//! then `-∇²` and a harmonic well `V ≈ ω²δ²/4` has ground state
//! `exp(-ωδ²/4)`.
//!
//! The potential `Vx sin²x + V1 sin²y + V2 sin²(2y + φ/2)` is a sum of an
//! `x` part and a `y` part, and every orbital is a product of 1D oscillator
//! functions, so overlaps and Hamiltonian elements between primitive
//! orbitals reduce to 1D quadratures.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::lattice::HoppingParams;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticalPotentialSpec {
    pub vx: f64,
    pub v1: f64,
    pub v2: f64,
    pub phi: f64,
}

impl OpticalPotentialSpec {
    pub fn new(vx: f64, v1: f64, v2: f64, phi: f64) -> Self {
        Self { vx, v1, v2, phi }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.vx, self.v1, self.v2, self.phi];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("potential parameters must be finite".into()));
        }
        if self.vx <= 0.0 || self.v1 < 0.0 || self.v2 < 0.0 {
            return Err(Error::InvalidInput("need vx > 0 and v1, v2 >= 0".into()));
        }
        Ok(())
    }

    pub fn x_part(&self, x: f64) -> f64 {
        self.vx * x.sin().powi(2)
    }

    pub fn y_part(&self, y: f64) -> f64 {
        self.v1 * y.sin().powi(2) + self.v2 * (2.0 * y + self.phi / 2.0).sin().powi(2)
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.x_part(x) + self.y_part(y)
    }

    /// `d²V/dy²`
    fn y_curvature(&self, y: f64) -> f64 {
        2.0 * self.v1 * (2.0 * y).cos() + 8.0 * self.v2 * (4.0 * y + self.phi).cos()
    }

    fn y_slope(&self, y: f64) -> f64 {
        self.v1 * (2.0 * y).sin() + 2.0 * self.v2 * (4.0 * y + self.phi).sin()
    }
}

/// Potential minima: the `x` positions `nπ` inside the window and the two
/// inequivalent `y` wells of one period.
#[derive(Clone, Debug, PartialEq)]
pub struct Minima {
    pub x: Vec<f64>,
    /// Deeper well first, positions reduced to `[0, π)`.
    pub y_wells: Vec<f64>,
}

impl Minima {
    pub fn deep(&self) -> f64 {
        self.y_wells[0]
    }

    pub fn shallow(&self) -> f64 {
        self.y_wells[self.y_wells.len() - 1]
    }
}

/// Local minima of the `y` potential over one period: sign changes of the
/// slope on a fine scan, polished by Newton on the slope.
fn y_minima(pot: &OpticalPotentialSpec) -> Vec<f64> {
    const SCAN: usize = 4096;
    let mut out: Vec<f64> = Vec::new();
    for i in 0..SCAN {
        // half-step offset keeps a minimum at a grid point strictly inside
        let a = PI * (i as f64 - 0.5) / SCAN as f64;
        let b = PI * (i as f64 + 0.5) / SCAN as f64;
        let (sa, sb) = (pot.y_slope(a), pot.y_slope(b));
        if !(sa < 0.0 && sb >= 0.0) {
            continue;
        }
        // bisection then Newton; the slope is smooth and monotone here
        let (mut lo, mut hi) = (a, b);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if pot.y_slope(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut y = 0.5 * (lo + hi);
        for _ in 0..3 {
            let c = pot.y_curvature(y);
            if c > 0.0 {
                y -= pot.y_slope(y) / c;
            }
        }
        let y = y.rem_euclid(PI);
        if !out.iter().any(|&z| (z - y).abs() < 1e-9 || (z - y).abs() > PI - 1e-9) {
            out.push(y);
        }
    }
    out.sort_by(|a, b| pot.y_part(*a).total_cmp(&pot.y_part(*b)));
    out
}

/// `window` is the number of lattice periods on each side of the origin.
pub fn find_minima(pot: &OpticalPotentialSpec, window: usize) -> Result<Minima> {
    pot.validate()?;
    if window < 1 {
        return Err(Error::InvalidInput("window must cover at least three wells".into()));
    }
    let w = window as i64;
    let x = (-w..=w).map(|n| n as f64 * PI).collect();
    let y_wells = y_minima(pot);
    if y_wells.len() < 2 {
        return Err(Error::NotDoubleWell(format!("{} y-minimum per period", y_wells.len())));
    }
    Ok(Minima { x, y_wells })
}

/// `ω_x = √(4Vx cos 2x0)`, `ω_y = √(4V1 cos 2y0 + 16V2 cos(4y0 + φ))`.
pub fn harmonic_freqs(pot: &OpticalPotentialSpec, minimum: (f64, f64)) -> Result<(f64, f64)> {
    let (x0, y0) = minimum;
    let cx = 4.0 * pot.vx * (2.0 * x0).cos();
    let cy = 4.0 * pot.v1 * (2.0 * y0).cos() + 16.0 * pot.v2 * (4.0 * y0 + pot.phi).cos();
    if cx <= 0.0 || cy <= 0.0 {
        return Err(Error::SaddlePoint(format!("curvatures ({cx}, {cy}) at ({x0}, {y0})")));
    }
    Ok((cx.sqrt(), cy.sqrt()))
}

/// 1D oscillator function `N_l H_l(√(ω/2) δ) exp(-ωδ²/4)` for `l ∈ {0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Oscillator1d {
    pub center: f64,
    pub omega: f64,
    pub level: u8,
}

impl Oscillator1d {
    /// Value and first derivative.
    pub fn eval(&self, u: f64) -> (f64, f64) {
        let d = u - self.center;
        let w = self.omega;
        let g = (-w * d * d / 4.0).exp();
        let n0 = (w / (2.0 * PI)).powf(0.25);
        match self.level {
            0 => (n0 * g, -n0 * g * w * d / 2.0),
            // H_1(z) = 2z with z = √(ω/2) δ and N_1 = N_0 / √2
            _ => {
                let c = n0 * w.sqrt();
                (c * d * g, c * g * (1.0 - w * d * d / 2.0))
            }
        }
    }
}

/// Model orbital in the tight-binding cell: `s` sits on the shallow well,
/// `p_x` on the deep one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orbital {
    S,
    Px,
}

/// One primitive 2D orbital `X(x) Y(y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Primitive {
    /// Cell index `(n, m)`; the orbital sits at `(nπ, y_well + mπ)`.
    pub cell: (i64, i64),
    pub orbital: Orbital,
    pub x: Oscillator1d,
    pub y: Oscillator1d,
}

/// Orbitals expanded over the primitive oscillators: column `i` holds the
/// coefficients of basis function `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct WannierBasis {
    pub primitives: Vec<Primitive>,
    pub coeffs: Vec<Vec<f64>>,
    /// Largest off-diagonal overlap of the current basis.
    pub residual: f64,
}

/// Uniform trapezoid quadrature on `[lo, hi]` with spacing at most `h`.
#[derive(Clone, Debug)]
struct Grid {
    nodes: Vec<f64>,
    weight: f64,
}

impl Grid {
    fn new(lo: f64, hi: f64, h: f64) -> Self {
        let n = ((hi - lo) / h).ceil() as usize;
        let step = (hi - lo) / n as f64;
        Self { nodes: (0..=n).map(|i| lo + step * i as f64).collect(), weight: step }
    }
}

/// Matrices of 1D integrals between a list of oscillator functions:
/// overlap, kinetic `∫ f'g'` and potential `∫ f V g`.
struct Integrals1d {
    overlap: Vec<Vec<f64>>,
    hamiltonian: Vec<Vec<f64>>,
}

fn integrals_1d(funcs: &[Oscillator1d], grid: &Grid, potential: impl Fn(f64) -> f64) -> Integrals1d {
    let n = funcs.len();
    let vals: Vec<Vec<(f64, f64)>> = funcs.iter().map(|f| grid.nodes.iter().map(|&u| f.eval(u)).collect()).collect();
    let pot: Vec<f64> = grid.nodes.iter().map(|&u| potential(u)).collect();
    let mut overlap = vec![vec![0.0; n]; n];
    let mut hamiltonian = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in a..n {
            let (mut s, mut h) = (0.0, 0.0);
            for (k, v) in pot.iter().enumerate() {
                let (fa, da) = vals[a][k];
                let (fb, db) = vals[b][k];
                s += fa * fb;
                h += da * db + fa * v * fb;
            }
            // the oscillators vanish at the window edge, so trapezoid end
            // corrections are below rounding
            overlap[a][b] = s * grid.weight;
            overlap[b][a] = overlap[a][b];
            hamiltonian[a][b] = h * grid.weight;
            hamiltonian[b][a] = hamiltonian[a][b];
        }
    }
    Integrals1d { overlap, hamiltonian }
}

/// Overlap and Hamiltonian matrices over the primitives.
#[derive(Clone, Debug)]
pub struct PrimitiveMatrices {
    pub overlap: Vec<Vec<f64>>,
    pub hamiltonian: Vec<Vec<f64>>,
}

/// Setup for building and evaluating the basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WannierOptions {
    /// Lattice periods kept on each side of the central cell.
    pub window: usize,
    /// Quadrature spacing; at most `λ_L / 64 = 2π/64`.
    pub spacing: f64,
    pub iterations: usize,
}

impl Default for WannierOptions {
    fn default() -> Self {
        Self { window: 6, spacing: 2.0 * PI / 64.0, iterations: 6 }
    }
}

/// Oscillator orbitals on every cell of the window.
pub fn harmonic_basis(pot: &OpticalPotentialSpec, opts: &WannierOptions) -> Result<(WannierBasis, Minima)> {
    let minima = find_minima(pot, opts.window)?;
    let (wx_s, wy_s) = harmonic_freqs(pot, (0.0, minima.shallow()))?;
    let (wx_p, wy_p) = harmonic_freqs(pot, (0.0, minima.deep()))?;
    // a cell holds the s well and the p well just above it
    let offset = (minima.deep() - minima.shallow()).rem_euclid(PI);
    let w = opts.window as i64;
    let mut primitives = Vec::new();
    for m in -w..=w {
        for n in -w..=w {
            let xc = n as f64 * PI;
            let ys = minima.shallow() + m as f64 * PI;
            let yp = ys + offset;
            primitives.push(Primitive {
                cell: (n, m),
                orbital: Orbital::S,
                x: Oscillator1d { center: xc, omega: wx_s, level: 0 },
                y: Oscillator1d { center: ys, omega: wy_s, level: 0 },
            });
            primitives.push(Primitive {
                cell: (n, m),
                orbital: Orbital::Px,
                x: Oscillator1d { center: xc, omega: wx_p, level: 1 },
                y: Oscillator1d { center: yp, omega: wy_p, level: 0 },
            });
        }
    }
    let n = primitives.len();
    let coeffs = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let mut basis = WannierBasis { primitives, coeffs, residual: 0.0 };
    let mats = primitive_matrices(&basis, pot, opts.spacing)?;
    basis.residual = overlap_residual(&basis, &mats.overlap).0;
    Ok((basis, minima))
}

/// Distinct 1D functions and, per primitive, their indices.
fn unique_1d(funcs: impl Iterator<Item = Oscillator1d>) -> (Vec<Oscillator1d>, Vec<usize>) {
    let mut list: Vec<Oscillator1d> = Vec::new();
    let mut index = Vec::new();
    for f in funcs {
        let i = list.iter().position(|g| *g == f).unwrap_or_else(|| {
            list.push(f);
            list.len() - 1
        });
        index.push(i);
    }
    (list, index)
}

pub fn primitive_matrices(basis: &WannierBasis, pot: &OpticalPotentialSpec, spacing: f64) -> Result<PrimitiveMatrices> {
    if !(spacing > 0.0 && spacing <= 2.0 * PI / 64.0 + 1e-15) {
        return Err(Error::InvalidInput(format!("quadrature spacing {spacing} exceeds λ_L/64")));
    }
    let (xs, xi) = unique_1d(basis.primitives.iter().map(|p| p.x));
    let (ys, yi) = unique_1d(basis.primitives.iter().map(|p| p.y));
    // the widest oscillator decays below 1e-17 within 12 / √ω
    let margin = |fs: &[Oscillator1d]| fs.iter().map(|f| 12.0 / f.omega.sqrt()).fold(0.0, f64::max);
    let span = |fs: &[Oscillator1d]| {
        let lo = fs.iter().map(|f| f.center).fold(f64::INFINITY, f64::min);
        let hi = fs.iter().map(|f| f.center).fold(f64::NEG_INFINITY, f64::max);
        (lo - margin(fs), hi + margin(fs))
    };
    let (x0, x1) = span(&xs);
    let (y0, y1) = span(&ys);
    let ix = integrals_1d(&xs, &Grid::new(x0, x1, spacing), |x| pot.x_part(x));
    let iy = integrals_1d(&ys, &Grid::new(y0, y1, spacing), |y| pot.y_part(y));
    let n = basis.primitives.len();
    let mut overlap = vec![vec![0.0; n]; n];
    let mut hamiltonian = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let (sx, hx) = (ix.overlap[xi[a]][xi[b]], ix.hamiltonian[xi[a]][xi[b]]);
            let (sy, hy) = (iy.overlap[yi[a]][yi[b]], iy.hamiltonian[yi[a]][yi[b]]);
            overlap[a][b] = sx * sy;
            // H = H_x + H_y on a product state
            hamiltonian[a][b] = hx * sy + sx * hy;
        }
    }
    Ok(PrimitiveMatrices { overlap, hamiltonian })
}

/// `Cᵀ M C` restricted to columns `i` and `j`.
fn sandwich(c: &[Vec<f64>], m: &[Vec<f64>], i: usize, j: usize) -> f64 {
    let n = m.len();
    let mut acc = 0.0;
    for a in 0..n {
        let ca = c[a][i];
        if ca == 0.0 {
            continue;
        }
        let row = &m[a];
        let mut inner = 0.0;
        for b in 0..n {
            inner += row[b] * c[b][j];
        }
        acc += ca * inner;
    }
    acc
}

/// Full Gram matrix `Cᵀ S C`.
fn gram(c: &[Vec<f64>], s: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = s.len();
    // SC first, then Cᵀ(SC)
    let mut sc = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let v = s[a][b];
            if v == 0.0 {
                continue;
            }
            for j in 0..n {
                sc[a][j] += v * c[b][j];
            }
        }
    }
    let mut g = vec![vec![0.0; n]; n];
    for a in 0..n {
        for i in 0..n {
            let ca = c[a][i];
            if ca == 0.0 {
                continue;
            }
            for j in 0..n {
                g[i][j] += ca * sc[a][j];
            }
        }
    }
    g
}

/// `(max off-diagonal |overlap|, max |norm - 1|)`
fn overlap_residual(basis: &WannierBasis, s: &[Vec<f64>]) -> (f64, f64) {
    let g = gram(&basis.coeffs, s);
    let mut off = 0.0f64;
    let mut diag = 0.0f64;
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i == j {
                diag = diag.max((v - 1.0).abs());
            } else {
                off = off.max(v.abs());
            }
        }
    }
    (off, diag)
}

/// Iterates `φ̃_i = φ_i - ½ Σ_j ε_ji φ_j` followed by renormalization.
/// Each pass squares the residual overlap.
pub fn orthogonalize(basis: &WannierBasis, overlap: &[Vec<f64>], iterations: usize) -> Result<WannierBasis> {
    let n = basis.coeffs.len();
    let mut c = basis.coeffs.clone();
    let first = overlap_residual(basis, overlap).0;
    if first >= 0.5 {
        return Err(Error::DivergenceRisk(first));
    }
    for _ in 0..iterations {
        let g = gram(&c, overlap);
        let mut next = vec![vec![0.0; n]; n];
        for a in 0..n {
            for i in 0..n {
                let mut v = c[a][i];
                for j in 0..n {
                    if j != i {
                        v -= 0.5 * g[j][i] * c[a][j];
                    }
                }
                next[a][i] = v;
            }
        }
        for i in 0..n {
            let norm = sandwich(&next, overlap, i, i).sqrt();
            for row in next.iter_mut() {
                row[i] /= norm;
            }
        }
        c = next;
    }
    let mut out = WannierBasis { primitives: basis.primitives.clone(), coeffs: c, residual: 0.0 };
    out.residual = overlap_residual(&out, overlap).0;
    Ok(out)
}

/// Column of the basis function for `orbital` in `cell`.
fn column(basis: &WannierBasis, cell: (i64, i64), orbital: Orbital) -> Option<usize> {
    basis.primitives.iter().position(|p| p.cell == cell && p.orbital == orbital)
}

/// `t_{αα'}(ΔR) = <α, 0| H |α', ΔR>` as a 2x2 block over `(s, p_x)`.
pub fn hopping_integral(basis: &WannierBasis, matrices: &PrimitiveMatrices, displacement: (i64, i64)) -> Result<[[f64; 2]; 2]> {
    let orbs = [Orbital::S, Orbital::Px];
    let mut block = [[0.0; 2]; 2];
    for (a, &oa) in orbs.iter().enumerate() {
        for (b, &ob) in orbs.iter().enumerate() {
            let i = column(basis, (0, 0), oa).ok_or_else(|| Error::InvalidInput("central cell missing".into()))?;
            let j = column(basis, displacement, ob)
                .ok_or_else(|| Error::InvalidInput(format!("displacement {displacement:?} outside the window")))?;
            block[a][b] = sandwich(&basis.coeffs, &matrices.hamiltonian, i, j);
        }
    }
    Ok(block)
}

/// Couplings of one potential together with the raw blocks they came from.
///
/// The couplings are the integrals themselves, `t_αα' = <α, 0|H|α', d>`,
/// read at `d = +x` for `t_s`, `t_p`, `t_sp` and at `d = (1, -1)` for
/// `t'_sp`. These are the signs that the ladder parameter tables use.
#[derive(Clone, Debug, PartialEq)]
pub struct WannierFit {
    pub params: HoppingParams,
    /// Blocks `<·, 0|H|·, d>` for `d = (0,0), (1,0), (1,1), (1,-1), (0,1)`.
    pub blocks: Vec<((i64, i64), [[f64; 2]; 2])>,
    pub residual: f64,
    pub minima: Minima,
    /// The fit ran on the mirror image `y → -y` (`φ → -φ`) so that the
    /// shorter s-p bond is the one along `x` inside a cell.
    pub mirrored: bool,
}

const FIT_DISPLACEMENTS: [(i64, i64); 5] = [(0, 0), (1, 0), (1, 1), (1, -1), (0, 1)];

/// Whether the `p` well nearest to `s` lies below it; the ladder cell pairs
/// `s` with the `p` well just above.
fn needs_mirror(pot: &OpticalPotentialSpec) -> Result<bool> {
    let m = find_minima(pot, 1)?;
    Ok((m.deep() - m.shallow()).rem_euclid(PI) > PI / 2.0)
}

fn fit_once(pot: &OpticalPotentialSpec, opts: &WannierOptions, gamma: f64) -> Result<WannierFit> {
    let mirrored = needs_mirror(pot)?;
    let pot = &if mirrored { OpticalPotentialSpec { phi: -pot.phi, ..*pot } } else { *pot };
    let (basis, minima) = harmonic_basis(pot, opts)?;
    let mats = primitive_matrices(&basis, pot, opts.spacing)?;
    let ortho = orthogonalize(&basis, &mats.overlap, opts.iterations)?;
    let blocks = FIT_DISPLACEMENTS
        .iter()
        .map(|&d| hopping_integral(&ortho, &mats, d).map(|b| (d, b)))
        .collect::<Result<Vec<_>>>()?;
    let get = |d: (i64, i64)| blocks.iter().find(|b| b.0 == d).unwrap().1;
    let params = HoppingParams {
        t_s: get((1, 0))[0][0],
        t_p: get((1, 0))[1][1],
        t_sp: get((1, 0))[0][1],
        t_sp_prime: get((1, -1))[0][1],
        gamma,
        delta_y: 0.0,
    };
    Ok(WannierFit { params, blocks, residual: ortho.residual, minima, mirrored })
}

/// Full pipeline at the requested resolution and again at half the
/// quadrature spacing; fails if any coupling moves by more than `1e-3`.
pub fn fit_tight_binding(pot: &OpticalPotentialSpec, opts: &WannierOptions, gamma: f64) -> Result<WannierFit> {
    let fit = fit_once(pot, opts, gamma)?;
    let fine = fit_once(pot, &WannierOptions { spacing: opts.spacing / 2.0, ..*opts }, gamma)?;
    let mut worst = 0.0f64;
    for ((_, a), (_, b)) in fit.blocks.iter().zip(&fine.blocks) {
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((a[r][c] - b[r][c]).abs());
            }
        }
    }
    if worst > 1e-3 {
        return Err(Error::Resolution(worst));
    }
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_potential() -> OpticalPotentialSpec {
        OpticalPotentialSpec::new(0.8, 10.0, 13.0, 0.8 * PI)
    }

    fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        while b - a > 1e-12 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        0.5 * (a + b)
    }

    fn basis_from_overlap(s: &[Vec<f64>]) -> WannierBasis {
        let n = s.len();
        let osc = Oscillator1d { center: 0.0, omega: 1.0, level: 0 };
        let primitives = (0..n)
            .map(|i| Primitive { cell: (i as i64, 0), orbital: Orbital::S, x: osc, y: osc })
            .collect();
        let coeffs = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        let mut b = WannierBasis { primitives, coeffs, residual: 0.0 };
        b.residual = overlap_residual(&b, s).0;
        b
    }

    #[test]
    fn single_sinusoid_has_one_minimum_at_zero() {
        let pot = OpticalPotentialSpec::new(1.0, 4.0, 0.0, 0.0);
        let ys = y_minima(&pot);
        assert_eq!(ys.len(), 1);
        assert!(ys[0].abs() < 1e-10 || (ys[0] - PI).abs() < 1e-10);
        assert!(matches!(find_minima(&pot, 3), Err(Error::NotDoubleWell(_))));
    }

    #[test]
    fn x_minima_sit_on_multiples_of_pi() {
        let m = find_minima(&reference_potential(), 3).unwrap();
        assert_eq!(m.x.len(), 7);
        for (i, x) in m.x.iter().enumerate() {
            assert_eq!(*x, (i as f64 - 3.0) * PI);
        }
    }

    #[test]
    fn double_well_minima_match_golden_section() {
        let pot = reference_potential();
        let m = find_minima(&pot, 3).unwrap();
        assert_eq!(m.y_wells.len(), 2);
        for &y in &m.y_wells {
            let g = golden_min(|u| pot.y_part(u), y - 0.1, y + 0.1);
            assert!((g - y).abs() < 1e-6, "{g} vs {y}");
            // the slope root is sharper than the golden-section bracket
            assert!(pot.y_slope(y).abs() < 1e-9);
        }
        assert!(pot.y_part(m.deep()) < pot.y_part(m.shallow()));
        assert!((m.deep() - 2.599_952_172_217_6).abs() < 1e-10);
        assert!((m.shallow() - 0.844_506_606_617_3).abs() < 1e-10);
    }

    #[test]
    fn frequencies() {
        let pot = reference_potential();
        let (wx, _) = harmonic_freqs(&pot, (0.0, find_minima(&pot, 3).unwrap().deep())).unwrap();
        assert!((wx - 3.2f64.sqrt()).abs() < 1e-12);
        let single = OpticalPotentialSpec::new(1.0, 7.0, 0.0, 0.0);
        let (_, wy) = harmonic_freqs(&single, (0.0, 0.0)).unwrap();
        assert!((wy - 2.0 * 7f64.sqrt()).abs() < 1e-12);
        assert!(matches!(harmonic_freqs(&single, (PI / 2.0, 0.0)), Err(Error::SaddlePoint(_))));
    }

    #[test]
    fn frequencies_match_second_differences() {
        let pot = reference_potential();
        let m = find_minima(&pot, 3).unwrap();
        let h = 1e-4;
        let mut seen = Vec::new();
        for &y in &m.y_wells {
            let d2 = (pot.y_part(y + h) - 2.0 * pot.y_part(y) + pot.y_part(y - h)) / (h * h);
            let (_, wy) = harmonic_freqs(&pot, (0.0, y)).unwrap();
            // V ≈ ω²δ²/4
            assert!((wy - (2.0 * d2).sqrt()).abs() < 1e-5, "{wy}");
            seen.push(wy);
        }
        assert!((seen[0] - seen[1]).abs() > 0.1);
    }

    #[test]
    fn harmonic_level_energies() {
        let omega = 3.0;
        let grid = Grid::new(-12.0, 12.0, 0.01);
        let funcs = [0, 1].map(|level| Oscillator1d { center: 0.0, omega, level });
        let ints = integrals_1d(&funcs, &grid, |u| omega * omega * u * u / 4.0);
        for l in 0..2 {
            assert!((ints.overlap[l][l] - 1.0).abs() < 1e-12);
            assert!((ints.hamiltonian[l][l] - omega * (l as f64 + 0.5)).abs() < 1e-10);
        }
        assert!(ints.overlap[0][1].abs() < 1e-14);
        // 2D level plus the potential offset at the minimum
        let (wx, wy, v0) = (1.7, 4.1, 0.3);
        let fx = [Oscillator1d { center: 0.0, omega: wx, level: 1 }];
        let fy = [Oscillator1d { center: 0.0, omega: wy, level: 0 }];
        let ix = integrals_1d(&fx, &grid, |u| wx * wx * u * u / 4.0 + v0);
        let iy = integrals_1d(&fy, &grid, |u| wy * wy * u * u / 4.0);
        let e = ix.hamiltonian[0][0] * iy.overlap[0][0] + ix.overlap[0][0] * iy.hamiltonian[0][0];
        assert!((e - (1.5 * wx + 0.5 * wy + v0)).abs() < 1e-10);
    }

    #[test]
    fn orthonormal_basis_is_a_fixed_point() {
        let s = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let b = basis_from_overlap(&s);
        let out = orthogonalize(&b, &s, 3).unwrap();
        assert_eq!(out.coeffs, b.coeffs);
        assert_eq!(out.residual, 0.0);
    }

    #[test]
    fn gaussian_pair_converges_quadratically() {
        // ground-state Gaussians overlap as exp(-ωd²/8)
        let omega = 2.0;
        let d = (8.0 * 10f64.ln() / omega).sqrt();
        let funcs = [0.0, d].map(|center| Oscillator1d { center, omega, level: 0 });
        let ints = integrals_1d(&funcs, &Grid::new(-15.0, 15.0 + d, 0.01), |_| 0.0);
        let eps0 = ints.overlap[0][1];
        assert!((eps0 - 0.1).abs() < 1e-12);
        let b = basis_from_overlap(&ints.overlap);
        let one = orthogonalize(&b, &ints.overlap, 1).unwrap();
        let two = orthogonalize(&b, &ints.overlap, 2).unwrap();
        assert!(one.residual <= eps0 * eps0, "{}", one.residual);
        assert!(two.residual <= eps0.powi(4), "{}", two.residual);
        let norms = gram(&two.coeffs, &ints.overlap);
        assert!((norms[0][0] - 1.0).abs() < 1e-12 && (norms[1][1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn large_overlap_is_refused() {
        let s = vec![vec![1.0, 0.6], vec![0.6, 1.0]];
        assert!(matches!(orthogonalize(&basis_from_overlap(&s), &s, 2), Err(Error::DivergenceRisk(_))));
    }

    #[test]
    fn coarse_quadrature_is_refused() {
        let pot = reference_potential();
        let opts = WannierOptions { window: 1, ..Default::default() };
        let (b, _) = harmonic_basis(&pot, &opts).unwrap();
        assert!(primitive_matrices(&b, &pot, 0.2).is_err());
    }

    #[test]
    fn reference_basis_becomes_orthonormal() {
        let pot = reference_potential();
        let opts = WannierOptions { window: 2, ..Default::default() };
        let (b, _) = harmonic_basis(&pot, &opts).unwrap();
        let mats = primitive_matrices(&b, &pot, opts.spacing).unwrap();
        assert!(b.residual > 0.3 && b.residual < 0.5);
        let mut last = b.residual;
        for n in 1..=opts.iterations {
            let o = orthogonalize(&b, &mats.overlap, n).unwrap();
            assert!(o.residual < last);
            last = o.residual;
        }
        assert!(last < 1e-8);
        let o = orthogonalize(&b, &mats.overlap, opts.iterations).unwrap();
        let (off, diag) = overlap_residual(&o, &mats.overlap);
        assert!(off < 1e-8 && diag < 1e-10);
    }

    #[test]
    fn sp_blocks_are_odd_in_x() {
        let pot = OpticalPotentialSpec { phi: -0.8 * PI, ..reference_potential() };
        let opts = WannierOptions { window: 2, ..Default::default() };
        let (b, _) = harmonic_basis(&pot, &opts).unwrap();
        let mats = primitive_matrices(&b, &pot, opts.spacing).unwrap();
        let o = orthogonalize(&b, &mats.overlap, opts.iterations).unwrap();
        let fwd = hopping_integral(&o, &mats, (1, 0)).unwrap();
        let back = hopping_integral(&o, &mats, (-1, 0)).unwrap();
        assert!((fwd[0][1] + back[0][1]).abs() < 1e-10);
        assert!((fwd[0][0] - back[0][0]).abs() < 1e-10);
        let onsite = hopping_integral(&o, &mats, (0, 0)).unwrap();
        assert!(onsite[0][1].abs() < 1e-10);
        assert!(hopping_integral(&o, &mats, (5, 0)).is_err());
    }

    #[test]
    fn validation() {
        assert!(OpticalPotentialSpec::new(0.0, 1.0, 1.0, 0.0).validate().is_err());
        assert!(OpticalPotentialSpec::new(1.0, -1.0, 1.0, 0.0).validate().is_err());
        assert!(OpticalPotentialSpec::new(1.0, 1.0, 1.0, f64::NAN).validate().is_err());
        assert!(find_minima(&reference_potential(), 0).is_err());
    }
}
