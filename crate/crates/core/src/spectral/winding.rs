use std::f64::consts::PI;

use num_complex::Complex64;

use crate::lattice::{build_bloch, HoppingParams, Momentum};
use crate::{Error, Result};

pub const MIN_WINDING_SAMPLES: usize = 2048;
const MAX_WINDING_SAMPLES: usize = 1 << 18;

/// Closed loop `k(s) = origin + 2π s (nx, ny)`, `s ∈ [0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumLoop {
    pub origin: Momentum,
    pub turns: (i32, i32),
}

impl MomentumLoop {
    /// `kx` sweep at fixed `ky`.
    pub fn along_kx(ky: f64) -> Self {
        Self { origin: Momentum::new(-PI, ky), turns: (1, 0) }
    }

    /// `ky` sweep at fixed `kx`.
    pub fn along_ky(kx: f64) -> Self {
        Self { origin: Momentum::new(kx, -PI), turns: (0, 1) }
    }

    /// `k+` sweep at fixed `k-`; both `kx` and `ky` advance by 2π.
    pub fn along_k_plus(k_minus: f64) -> Self {
        Self { origin: Momentum::from_oblique(-PI, k_minus), turns: (1, 1) }
    }

    /// `k-` sweep at fixed `k+`.
    pub fn along_k_minus(k_plus: f64) -> Self {
        Self { origin: Momentum::from_oblique(k_plus, -PI), turns: (1, -1) }
    }

    pub fn reversed(self) -> Self {
        Self { turns: (-self.turns.0, -self.turns.1), ..self }
    }

    pub fn at(&self, s: f64) -> Momentum {
        let phase = 2.0 * PI * s;
        Momentum::new(
            self.origin.kx + phase * self.turns.0 as f64,
            self.origin.ky + phase * self.turns.1 as f64,
        )
    }
}

/// Which energy curve to wind around the base point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Winding {
    /// A single band, followed by nearest-neighbour continuation. If the
    /// band does not close after one traversal it is followed until it does,
    /// so the result counts the full closed curve.
    Band(usize),
    /// `det[H(k) - E0]`, the sum over both bands.
    Total,
}

/// Two band energies along the loop, continued smoothly and ordered at the
/// start by descending `Im`.
fn tracked_bands(p: &HoppingParams, lp: &MomentumLoop, samples: usize, traversals: usize) -> [Vec<Complex64>; 2] {
    let total = samples * traversals;
    let mut out = [Vec::with_capacity(total + 1), Vec::with_capacity(total + 1)];
    let first = build_bloch(p, lp.at(0.0)).bands();
    let mut prev = [first[0].0, first[1].0];
    for j in 0..=total {
        let [a, b] = build_bloch(p, lp.at(j as f64 / samples as f64)).eigenvalues();
        let keep = (a - prev[0]).norm() + (b - prev[1]).norm();
        let swap = (b - prev[0]).norm() + (a - prev[1]).norm();
        prev = if keep <= swap { [a, b] } else { [b, a] };
        out[0].push(prev[0]);
        out[1].push(prev[1]);
    }
    out
}

fn phase_sum(curve: impl Iterator<Item = Complex64>) -> f64 {
    let mut total = 0.0;
    let mut last: Option<Complex64> = None;
    for z in curve {
        if let Some(l) = last {
            total += (z / l).arg();
        }
        last = Some(z);
    }
    total / (2.0 * PI)
}

fn round_checked(w: f64, samples: usize) -> Result<i64> {
    let r = w.round();
    let residual = (w - r).abs();
    if residual >= 0.01 {
        return Err(Error::NeedsRefinement { residual, samples });
    }
    Ok(r as i64)
}

/// Distance from `e0` to the polyline through `curve`.
fn min_distance(curve: &[Complex64], e0: Complex64) -> f64 {
    if curve.len() == 1 {
        return (curve[0] - e0).norm();
    }
    curve
        .windows(2)
        .map(|w| {
            let seg = w[1] - w[0];
            let len2 = seg.norm_sqr();
            let t = if len2 > 0.0 { ((e0 - w[0]) * seg.conj()).re / len2 } else { 0.0 };
            (w[0] + seg * t.clamp(0.0, 1.0) - e0).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Winding number of the chosen energy curve around `e0` with `samples`
/// uniform samples per traversal of the loop.
pub fn spectral_winding(
    p: &HoppingParams,
    lp: &MomentumLoop,
    which: Winding,
    e0: Complex64,
    samples: usize,
) -> Result<i64> {
    let samples = samples.max(MIN_WINDING_SAMPLES);
    match which {
        Winding::Band(band) => {
            if band > 1 {
                return Err(Error::InvalidInput(format!("band {band} does not exist")));
            }
            let mut curve = tracked_bands(p, lp, samples, 1);
            let start = curve[band][0];
            let closes = (curve[band][samples] - start).norm() <= (curve[1 - band][samples] - start).norm();
            if !closes {
                curve = tracked_bands(p, lp, samples, 2);
            }
            let trace = &curve[band];
            let d = min_distance(trace, e0);
            if d <= 1e-8 {
                return Err(Error::IllConditioned { distance: d });
            }
            round_checked(phase_sum(trace.iter().map(|e| e - e0)), samples)
        }
        Winding::Total => {
            let curve = tracked_bands(p, lp, samples, 1);
            let d = min_distance(&curve[0], e0).min(min_distance(&curve[1], e0));
            let w = phase_sum(curve[0].iter().zip(&curve[1]).map(|(a, b)| (a - e0) * (b - e0)));
            if d <= 1e-8 {
                return Err(Error::IllConditioned { distance: d });
            }
            round_checked(w, samples)
        }
    }
}

/// Doubles the sampling until the residual rule is met.
pub fn spectral_winding_adaptive(
    p: &HoppingParams,
    lp: &MomentumLoop,
    which: Winding,
    e0: Complex64,
) -> Result<i64> {
    let mut samples = MIN_WINDING_SAMPLES;
    loop {
        match spectral_winding(p, lp, which, e0, samples) {
            Err(Error::NeedsRefinement { .. }) if samples < MAX_WINDING_SAMPLES => samples *= 2,
            other => return other,
        }
    }
}

/// Determinant windings around many base energies from one shared sampling
/// of the loop. Entries are `None` where the base point is ill-conditioned or
/// the residual rule fails.
pub fn total_winding_map(p: &HoppingParams, lp: &MomentumLoop, bases: &[Complex64], samples: usize) -> Vec<Option<i64>> {
    let samples = samples.max(MIN_WINDING_SAMPLES);
    let curve = tracked_bands(p, lp, samples, 1);
    bases
        .iter()
        .map(|&e0| {
            let d = min_distance(&curve[0], e0).min(min_distance(&curve[1], e0));
            if d <= 1e-8 {
                return None;
            }
            let w = phase_sum(curve[0].iter().zip(&curve[1]).map(|(a, b)| (a - e0) * (b - e0)));
            round_checked(w, samples).ok()
        })
        .collect()
}

/// Regular `n x n` grid of energies strictly inside the bounding box of the
/// band traces along a loop.
pub fn bounding_grid(p: &HoppingParams, lp: &MomentumLoop, n: usize) -> Vec<Complex64> {
    let c = tracked_bands(p, lp, 1024, 1);
    let (mut lo_re, mut hi_re, mut lo_im, mut hi_im) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in c.iter().flatten() {
        lo_re = lo_re.min(z.re);
        hi_re = hi_re.max(z.re);
        lo_im = lo_im.min(z.im);
        hi_im = hi_im.max(z.im);
    }
    let mut out = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            out.push(Complex64::new(
                lo_re + (hi_re - lo_re) * i as f64 / (n + 1) as f64,
                lo_im + (hi_im - lo_im) * j as f64 / (n + 1) as f64,
            ));
        }
    }
    out
}

/// Mean energy of one band over a closed traversal of the loop.
pub fn trajectory_centroid(p: &HoppingParams, lp: &MomentumLoop, band: usize) -> Complex64 {
    let n = 4096;
    let c = tracked_bands(p, lp, n, 2);
    c[band.min(1)][..2 * n].iter().sum::<Complex64>() / (2 * n) as f64
}

/// Up to `count` base energies on a regular grid inside the bounding box of
/// both band traces, each at least `clearance` away from the curves.
pub fn interior_base_points(p: &HoppingParams, lp: &MomentumLoop, count: usize, clearance: f64) -> Vec<Complex64> {
    let n = 1024;
    let c = tracked_bands(p, lp, n, 1);
    let all: Vec<Complex64> = c.iter().flatten().copied().collect();
    let (mut lo_re, mut hi_re, mut lo_im, mut hi_im) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in &all {
        lo_re = lo_re.min(z.re);
        hi_re = hi_re.max(z.re);
        lo_im = lo_im.min(z.im);
        hi_im = hi_im.max(z.im);
    }
    let mut out = Vec::new();
    let grid = 9;
    'outer: for i in 1..grid {
        for j in 1..grid {
            let e = Complex64::new(
                lo_re + (hi_re - lo_re) * i as f64 / grid as f64,
                lo_im + (hi_im - lo_im) * j as f64 / grid as f64,
            );
            if min_distance(&c[0], e).min(min_distance(&c[1], e)) > clearance {
                out.push(e);
                if out.len() == count {
                    break 'outer;
                }
            }
        }
    }
    out
}

/// Shorthand for the determinant winding with adaptive sampling.
pub fn total_winding(p: &HoppingParams, lp: &MomentumLoop, e0: Complex64) -> Result<i64> {
    spectral_winding_adaptive(p, lp, Winding::Total, e0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn centroid(p: &HoppingParams, lp: &MomentumLoop, band: usize) -> Complex64 {
        trajectory_centroid(p, lp, band)
    }

    #[test]
    fn hermitian_spectrum_never_winds() {
        let p = HoppingParams::main_text().with_gamma(0.0);
        for lp in [MomentumLoop::along_kx(0.3), MomentumLoop::along_k_plus(0.0)] {
            for e0 in [Complex64::new(0.2, 0.1), Complex64::new(-1.0, -0.3)] {
                assert_eq!(spectral_winding(&p, &lp, Winding::Total, e0, 2048).unwrap(), 0);
                assert_eq!(spectral_winding(&p, &lp, Winding::Band(0), e0, 2048).unwrap(), 0);
            }
        }
    }

    #[test]
    fn reversal_negates() {
        let p = HoppingParams::main_text();
        let lp = MomentumLoop::along_k_plus(PI / 4.0);
        let e0 = centroid(&p, &lp, 0);
        let w = spectral_winding(&p, &lp, Winding::Band(0), e0, 8192).unwrap();
        let r = spectral_winding(&p, &lp.reversed(), Winding::Band(0), e0, 8192).unwrap();
        assert_eq!(w.abs(), 1);
        assert_eq!(w, -r);
    }

    #[test]
    fn oblique_winding_is_odd_in_k_minus() {
        let p = HoppingParams::main_text();
        for km in [0.4, 0.785, 1.2] {
            let plus = MomentumLoop::along_k_plus(km);
            let minus = MomentumLoop::along_k_plus(-km);
            let w = spectral_winding(&p, &plus, Winding::Band(0), centroid(&p, &plus, 0), 8192).unwrap();
            let v = spectral_winding(&p, &minus, Winding::Band(0), centroid(&p, &minus, 0), 8192).unwrap();
            assert_eq!((w, v), (1, -1));
        }
    }

    #[test]
    fn diagonal_loop_retraces_itself() {
        // kx = ky: E(k) = E(-k), so each band traces an arc twice
        let p = HoppingParams::main_text();
        let lp = MomentumLoop::along_k_plus(0.0);
        for band in 0..2 {
            let e0 = centroid(&p, &lp, band);
            assert_eq!(spectral_winding(&p, &lp, Winding::Band(band), e0, 8192).unwrap(), 0);
        }
    }

    #[test]
    fn base_point_on_curve_is_ill_conditioned() {
        let p = HoppingParams::main_text();
        let lp = MomentumLoop::along_kx(0.0);
        let e0 = build_bloch(&p, lp.at(0.0)).eigenvalues()[0];
        assert!(matches!(
            spectral_winding(&p, &lp, Winding::Total, e0, 2048),
            Err(Error::IllConditioned { .. })
        ));
    }
}
