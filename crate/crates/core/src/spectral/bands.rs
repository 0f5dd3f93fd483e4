use num_complex::Complex64;

use crate::lattice::{build_bloch, HoppingParams, Momentum};

/// Straight momentum segment from `start` to `end` (unwrapped) sampled at
/// `samples` points including both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumPath {
    pub start: (f64, f64),
    pub end: (f64, f64),
    pub samples: usize,
}

impl MomentumPath {
    pub fn new(start: (f64, f64), end: (f64, f64), samples: usize) -> Self {
        Self { start, end, samples: samples.max(2) }
    }

    /// `ky` sweep over `[-π, π]` at fixed `kx`.
    pub fn fixed_kx(kx: f64, samples: usize) -> Self {
        use std::f64::consts::PI;
        Self::new((kx, -PI), (kx, PI), samples)
    }

    /// `kx` sweep over `[-π, π]` at fixed `ky`.
    pub fn fixed_ky(ky: f64, samples: usize) -> Self {
        use std::f64::consts::PI;
        Self::new((-PI, ky), (PI, ky), samples)
    }

    /// `k+` sweep over `[-π, π]` at fixed `k-`.
    pub fn fixed_k_minus(k_minus: f64, samples: usize) -> Self {
        use std::f64::consts::PI;
        Self::new((-PI + k_minus, -PI - k_minus), (PI + k_minus, PI - k_minus), samples)
    }

    /// Unwrapped momentum of sample `j`.
    pub fn raw(&self, j: usize) -> (f64, f64) {
        let s = j as f64 / (self.samples - 1) as f64;
        (
            self.start.0 + s * (self.end.0 - self.start.0),
            self.start.1 + s * (self.end.1 - self.start.1),
        )
    }

    pub fn at(&self, j: usize) -> Momentum {
        let (kx, ky) = self.raw(j);
        Momentum::new(kx, ky)
    }
}

/// Continuous two-band trace along a path.
#[derive(Clone, Debug, PartialEq)]
pub struct BandPath {
    pub path: MomentumPath,
    pub bands: [Vec<Complex64>; 2],
    /// Samples where the two eigenvalues coincide and the order fell back
    /// to sorting by `Re`.
    pub degenerate: Vec<usize>,
    /// Sample indices `j` such that `Im(E0 - E1)` changes sign between `j`
    /// and `j + 1` (or vanishes at `j`).
    pub im_crossings: Vec<usize>,
}

const DEGENERACY_TOL: f64 = 1e-12;
const CROSSING_TOL: f64 = 1e-9;

/// Eigenvalues of the Bloch matrix along a path, ordered by nearest
/// neighbour continuation from a start ordered by descending `Im`.
pub fn band_path(p: &HoppingParams, path: MomentumPath) -> BandPath {
    let mut bands = [Vec::with_capacity(path.samples), Vec::with_capacity(path.samples)];
    let mut degenerate = Vec::new();
    let mut prev: Option<[Complex64; 2]> = None;
    for j in 0..path.samples {
        let m = build_bloch(p, path.at(j));
        let [a, b] = m.eigenvalues();
        let pair = if (a - b).norm() < DEGENERACY_TOL {
            degenerate.push(j);
            if a.re >= b.re {
                [a, b]
            } else {
                [b, a]
            }
        } else if let Some(q) = prev {
            let keep = (a - q[0]).norm() + (b - q[1]).norm();
            let swap = (b - q[0]).norm() + (a - q[1]).norm();
            if keep <= swap {
                [a, b]
            } else {
                [b, a]
            }
        } else {
            let ordered = m.bands();
            [ordered[0].0, ordered[1].0]
        };
        bands[0].push(pair[0]);
        bands[1].push(pair[1]);
        prev = Some(pair);
    }

    let sign = |j: usize| {
        let d = bands[0][j].im - bands[1][j].im;
        if d > CROSSING_TOL {
            1
        } else if d < -CROSSING_TOL {
            -1
        } else {
            0
        }
    };
    let mut im_crossings = Vec::new();
    let mut last_sign = 0;
    let mut last_index = 0;
    for j in 0..path.samples {
        let s = sign(j);
        if s == 0 {
            continue;
        }
        if last_sign != 0 && s != last_sign {
            // exact zero samples in between mark the crossing point
            let mid = (last_index + 1..j).find(|&i| sign(i) == 0).unwrap_or(last_index);
            im_crossings.push(mid);
        }
        last_sign = s;
        last_index = j;
    }
    BandPath { path, bands, degenerate, im_crossings }
}
