use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::HoppingParams;
use crate::linalg::{eig2, eigvec2};

/// Crystal momentum with both components wrapped into `[-π, π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Momentum {
    pub kx: f64,
    pub ky: f64,
}

/// Wraps an angle into `[-π, π)`.
pub fn wrap_angle(k: f64) -> f64 {
    let w = (k + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid can round up to exactly 2π
    if w >= PI {
        w - 2.0 * PI
    } else {
        w
    }
}

impl Momentum {
    pub fn new(kx: f64, ky: f64) -> Self {
        Self { kx: wrap_angle(kx), ky: wrap_angle(ky) }
    }

    /// Oblique momenta `k± = (kx ± ky)/2`, so `kx = k+ + k-`, `ky = k+ - k-`.
    pub fn from_oblique(k_plus: f64, k_minus: f64) -> Self {
        Self::new(k_plus + k_minus, k_plus - k_minus)
    }

    pub fn k_plus(&self) -> f64 {
        0.5 * (self.kx + self.ky)
    }

    pub fn k_minus(&self) -> f64 {
        0.5 * (self.kx - self.ky)
    }
}

/// 2x2 Bloch matrix in the `(s, p_x)` basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochMatrix(pub [[Complex64; 2]; 2]);

impl BlochMatrix {
    pub fn adjoint(&self) -> Self {
        let m = self.0;
        Self([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn transpose(&self) -> Self {
        let m = self.0;
        Self([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    /// `σ_z M σ_z`
    pub fn sigma_z_conjugate(&self) -> Self {
        let m = self.0;
        Self([[m[0][0], -m[0][1]], [-m[1][0], m[1][1]]])
    }

    /// Entrywise max-norm distance.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let (a, b) = eig2(self.0);
        [a, b]
    }

    /// Eigenpairs ordered by descending `Im E`; ties (within 1e-9) are broken
    /// by descending `Re E`.
    pub fn bands(&self) -> [(Complex64, [Complex64; 2]); 2] {
        let [a, b] = self.eigenvalues();
        let (hi, lo) = if band_order_key(a, b) { (a, b) } else { (b, a) };
        [(hi, eigvec2(self.0, hi)), (lo, eigvec2(self.0, lo))]
    }
}

/// True when `a` should be listed before `b` in the band ordering.
fn band_order_key(a: Complex64, b: Complex64) -> bool {
    if (a.im - b.im).abs() > 1e-9 {
        a.im > b.im
    } else {
        a.re >= b.re
    }
}

/// `h·σ - iγ(σ0 - σz)/2 + Δy σy` with the four `h` components written out.
pub fn build_bloch(p: &HoppingParams, k: Momentum) -> BlochMatrix {
    let (skx, ckx) = k.kx.sin_cos();
    let (sky, cky) = k.ky.sin_cos();
    let h0 = (p.t_p - p.t_s) * ckx;
    let hx = -2.0 * p.t_sp_prime * sky * skx;
    let hy = 2.0 * p.t_sp * skx + 2.0 * p.t_sp_prime * cky * skx;
    let hz = -(p.t_p + p.t_s) * ckx;
    let c = Complex64::new;
    BlochMatrix([
        [c(h0 + hz, 0.0), c(hx, -hy) + c(0.0, -p.delta_y)],
        [c(hx, hy) + c(0.0, p.delta_y), c(h0 - hz, -p.gamma)],
    ])
}
