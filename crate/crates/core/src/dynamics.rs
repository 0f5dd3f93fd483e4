//! Non-unitary wave-packet dynamics under a static force and semiclassical
//! reconstruction of complex band energies from the trajectory.
//!
//! The force enters as the potential `+F·r`, so the packet momentum drifts
//! as `k(t) = k0 - F t`. The semiclassical relations used are
//! `d<r>/dt = ∇_k Re E` and `d ln N/dt = 2 Im E`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::lattice::{boundary_shell, GeometryMask, HoppingParams, Momentum, RealSpaceHamiltonian};
use crate::models::ModelDescriptor;
use crate::spectral::{band_path, MomentumPath};
use crate::{Error, Result};

pub const DEFAULT_SIGMA0: f64 = 4.5;
/// Upper bound on `dt` times the spectral-radius estimate.
pub const STABILITY_LIMIT: f64 = 0.1;
const MAX_DENOMINATOR: i128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WavePacketSpec {
    /// Packet centre in cell coordinates.
    pub r0: (f64, f64),
    pub k0: Momentum,
    pub sigma0: f64,
    /// Bloch band at `k0`, 0 = larger `Im E`.
    pub band: usize,
}

impl WavePacketSpec {
    /// Packet centred on the mask centroid with the default width.
    pub fn centered(mask: &GeometryMask, k0: Momentum, band: usize) -> Self {
        Self { r0: mask.centroid(), k0, sigma0: DEFAULT_SIGMA0, band }
    }
}

/// Distance from `r0` to the nearest outermost cell of the mask.
pub fn packet_clearance(mask: &GeometryMask, r0: (f64, f64)) -> Result<f64> {
    let shell = boundary_shell(mask, 1)?;
    Ok(shell
        .indices()
        .map(|i| {
            let (x, y) = mask.cells()[i];
            (x as f64 - r0.0).hypot(y as f64 - r0.1)
        })
        .fold(f64::INFINITY, f64::min))
}

/// `A exp(-(r - r0)^2 / σ0) exp(i k0·r) u_k0`, normalized to unit norm.
/// The exponent carries `σ0` itself, not `2σ0²`.
pub fn make_wave_packet(mask: &GeometryMask, spec: &WavePacketSpec, model: &ModelDescriptor) -> Result<Vec<Complex64>> {
    if !(spec.sigma0 > 0.0 && spec.sigma0.is_finite()) {
        return Err(Error::InvalidInput(format!("sigma0 = {} must be positive", spec.sigma0)));
    }
    let n = model.table.orbitals;
    if spec.band >= n {
        return Err(Error::InvalidInput(format!("band {} outside 0..{n}", spec.band)));
    }
    let bands = model.bands_at(spec.k0)?;
    if n > 1 && (bands[0].0 - bands[1].0).norm() < 1e-10 {
        return Err(Error::BandSelection(format!("bands are degenerate at k0 = ({}, {})", spec.k0.kx, spec.k0.ky)));
    }
    let u = &bands[spec.band].1;
    let mut psi = Vec::with_capacity(mask.len() * n);
    for &(x, y) in mask.cells() {
        let (x, y) = (x as f64, y as f64);
        let r2 = (x - spec.r0.0).powi(2) + (y - spec.r0.1).powi(2);
        let amp = Complex64::from_polar((-r2 / spec.sigma0).exp(), spec.k0.kx * x + spec.k0.ky * y);
        psi.extend(u.iter().map(|&c| amp * c));
    }
    let norm = crate::linalg::norm(&psi);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Numeric("wave packet has no weight on the mask".into()));
    }
    psi.iter_mut().for_each(|z| *z /= norm);
    Ok(psi)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Best rational approximation with denominator up to `MAX_DENOMINATOR`,
/// accepted only if it reproduces `x` to rounding accuracy.
fn to_rational(x: f64) -> Option<(i128, i128)> {
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > MAX_DENOMINATOR {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= 1e-12 * x.abs().max(1.0) {
            return Some((h1, k1));
        }
        let frac = r - a;
        if frac == 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// Bloch period `2π / F_{x/y}` for an axis-aligned force, or
/// `2π / gcrd(|F_x|, |F_y|)` when both components are rational.
pub fn bloch_period(force: (f64, f64)) -> Result<f64> {
    let (fx, fy) = (force.0.abs(), force.1.abs());
    if !fx.is_finite() || !fy.is_finite() {
        return Err(Error::InvalidInput("force must be finite".into()));
    }
    match (fx > 0.0, fy > 0.0) {
        (false, false) => Err(Error::InvalidInput("zero force has no Bloch period".into())),
        (true, false) => Ok(2.0 * std::f64::consts::PI / fx),
        (false, true) => Ok(2.0 * std::f64::consts::PI / fy),
        (true, true) => {
            let (Some((a, b)), Some((c, d))) = (to_rational(fx), to_rational(fy)) else {
                return Err(Error::NoPeriod(format!("force ({}, {}) has no rational ratio", force.0, force.1)));
            };
            // gcrd(a/b, c/d) = gcd(ad, cb) / bd
            let num = gcd(a * d, c * b);
            let den = b * d;
            Ok(2.0 * std::f64::consts::PI * den as f64 / num as f64)
        }
    }
}

/// Force, period (if any) and time step of one drive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DrivePlan {
    pub force: (f64, f64),
    pub period: Option<f64>,
    pub dt: f64,
}

impl DrivePlan {
    /// Uses the default step `0.002 / max(1, |F| L)` when `dt` is `None`.
    pub fn new(force: (f64, f64), lattice_size: usize, dt: Option<f64>) -> Self {
        let f = force.0.hypot(force.1);
        let dt = dt.unwrap_or(0.002 / (f * lattice_size as f64).max(1.0));
        let period = bloch_period(force).ok();
        Self { force, period, dt }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    /// `<r>_t` in cell coordinates.
    pub com: (f64, f64),
    /// `ln N_t`, accumulated across renormalizations.
    pub log_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySeries {
    pub k0: Momentum,
    pub force: (f64, f64),
    pub samples: Vec<TrajectorySample>,
}

impl TrajectorySeries {
    /// Unwrapped `k0 - F t` of sample `i`.
    pub fn k_raw(&self, i: usize) -> (f64, f64) {
        let t = self.samples[i].t;
        (self.k0.kx - self.force.0 * t, self.k0.ky - self.force.1 * t)
    }

    pub fn momentum(&self, i: usize) -> Momentum {
        let (kx, ky) = self.k_raw(i);
        Momentum::new(kx, ky)
    }
}

/// Potential `F·(r - c)` per matrix row, measured from the mask centroid `c`
/// to keep the spectral radius small. The offset only shifts every energy by
/// the same constant.
fn force_potential(h: &RealSpaceHamiltonian, force: (f64, f64)) -> Vec<f64> {
    let c = h.mask.centroid();
    (0..h.dim())
        .map(|i| {
            let (x, y) = h.cell_of_row(i);
            force.0 * (x as f64 - c.0) + force.1 * (y as f64 - c.1)
        })
        .collect()
}

fn center_of_mass(h: &RealSpaceHamiltonian, psi: &[Complex64]) -> (f64, f64) {
    let (mut w, mut x, mut y) = (0.0, 0.0, 0.0);
    for (i, z) in psi.iter().enumerate() {
        let p = z.norm_sqr();
        let (cx, cy) = h.cell_of_row(i);
        w += p;
        x += p * cx as f64;
        y += p * cy as f64;
    }
    (x / w, y / w)
}

/// Fixed-step RK4 integration of `i dψ/dt = (H + F·r) ψ`. The state is
/// renormalized after every step and the log of the norm factor is
/// accumulated, so the series survives arbitrarily strong decay.
pub fn evolve(
    h: &RealSpaceHamiltonian,
    k0: Momentum,
    force: (f64, f64),
    psi0: &[Complex64],
    duration: f64,
    dt: f64,
) -> Result<TrajectorySeries> {
    evolve_with_state(h, k0, force, psi0, duration, dt).map(|r| r.0)
}

/// [`evolve`], also returning the normalized final state.
pub fn evolve_with_state(
    h: &RealSpaceHamiltonian,
    k0: Momentum,
    force: (f64, f64),
    psi0: &[Complex64],
    duration: f64,
    dt: f64,
) -> Result<(TrajectorySeries, Vec<Complex64>)> {
    let dim = h.dim();
    if psi0.len() != dim {
        return Err(Error::InvalidInput(format!("state length {} does not match dimension {dim}", psi0.len())));
    }
    if !(dt > 0.0 && duration >= 0.0 && dt.is_finite() && duration.is_finite()) {
        return Err(Error::InvalidInput(format!("invalid duration {duration} or dt {dt}")));
    }
    let v = force_potential(h, force);
    let radius = h.matrix.max_row_sum() + v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if dt * radius >= STABILITY_LIMIT {
        return Err(Error::StepSize { dt, product: dt * radius });
    }
    let steps = (duration / dt).round() as usize;
    let dt = if steps > 0 { duration / steps as f64 } else { dt };

    let minus_i = Complex64::new(0.0, -1.0);
    let apply = |x: &[Complex64], out: &mut [Complex64]| {
        h.matrix.matvec_into(x, out);
        for ((o, xi), vi) in out.iter_mut().zip(x).zip(&v) {
            *o = minus_i * (*o + xi * vi);
        }
    };

    let n0 = crate::linalg::norm(psi0);
    if n0 == 0.0 || !n0.is_finite() {
        return Err(Error::InvalidInput("initial state has zero norm".into()));
    }
    let mut psi: Vec<Complex64> = psi0.iter().map(|z| z / n0).collect();
    let mut log_norm = 2.0 * n0.ln();
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(TrajectorySample { t: 0.0, com: center_of_mass(h, &psi), log_norm });

    let zero = Complex64::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4) = (vec![zero; dim], vec![zero; dim], vec![zero; dim], vec![zero; dim]);
    let mut tmp = vec![zero; dim];
    for step in 1..=steps {
        apply(&psi, &mut k1);
        for i in 0..dim {
            tmp[i] = psi[i] + k1[i] * (0.5 * dt);
        }
        apply(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = psi[i] + k2[i] * (0.5 * dt);
        }
        apply(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = psi[i] + k3[i] * dt;
        }
        apply(&tmp, &mut k4);
        for i in 0..dim {
            psi[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
        }
        let n = crate::linalg::norm(&psi);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Numeric(format!("state norm collapsed at step {step}")));
        }
        psi.iter_mut().for_each(|z| *z /= n);
        log_norm += 2.0 * n.ln();
        samples.push(TrajectorySample { t: step as f64 * dt, com: center_of_mass(h, &psi), log_norm });
    }
    Ok((TrajectorySeries { k0, force, samples }, psi))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReconstructedSample {
    pub t: f64,
    /// Unwrapped drive momentum.
    pub k: (f64, f64),
    pub energy: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructedSpectrum {
    pub samples: Vec<ReconstructedSample>,
}

/// Central differences inside, one-sided at the ends.
fn derivative(t: &[f64], f: &[f64]) -> Vec<f64> {
    let n = t.len();
    (0..n)
        .map(|i| {
            let (a, b) = if i == 0 {
                (0, 1)
            } else if i == n - 1 {
                (n - 2, n - 1)
            } else {
                (i - 1, i + 1)
            };
            (f[b] - f[a]) / (t[b] - t[a])
        })
        .collect()
}

/// `Im E = ½ d ln N/dt` and `Re E = Re(anchor) - ∫ F·v dt`.
pub fn reconstruct_spectrum(traj: &TrajectorySeries, anchor: Complex64) -> Result<ReconstructedSpectrum> {
    let n = traj.samples.len();
    if n < 64 {
        return Err(Error::InvalidInput(format!("{n} trajectory samples, need at least 64")));
    }
    let t: Vec<f64> = traj.samples.iter().map(|s| s.t).collect();
    let ln: Vec<f64> = traj.samples.iter().map(|s| s.log_norm).collect();
    let x: Vec<f64> = traj.samples.iter().map(|s| s.com.0).collect();
    let y: Vec<f64> = traj.samples.iter().map(|s| s.com.1).collect();
    let growth = derivative(&t, &ln);
    let vx = derivative(&t, &x);
    let vy = derivative(&t, &y);
    let power: Vec<f64> = vx.iter().zip(&vy).map(|(a, b)| traj.force.0 * a + traj.force.1 * b).collect();
    let mut re = anchor.re;
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            re -= 0.5 * (power[i] + power[i - 1]) * (t[i] - t[i - 1]);
        }
        samples.push(ReconstructedSample { t: t[i], k: traj.k_raw(i), energy: Complex64::new(re, 0.5 * growth[i]) });
    }
    Ok(ReconstructedSpectrum { samples })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplittingProfile {
    /// `(Re E, |Im E_forward - Im E_backward|)`
    pub points: Vec<(f64, f64)>,
    pub max: f64,
}

/// Maximal runs of samples over which `Re E` moves monotonically.
fn monotone_runs(re: &[f64]) -> Vec<(usize, usize, f64)> {
    let mut runs = Vec::new();
    let mut start = 0;
    let mut sign = 0.0;
    for i in 1..re.len() {
        let d = re[i] - re[i - 1];
        if d == 0.0 {
            continue;
        }
        let s = d.signum();
        if sign == 0.0 {
            sign = s;
        } else if s != sign {
            runs.push((start, i - 1, sign));
            start = i - 1;
            sign = s;
        }
    }
    if sign != 0.0 {
        runs.push((start, re.len() - 1, sign));
    }
    runs
}

/// Linear interpolation of `Im E` at `Re E = target` within a monotone run.
fn im_at(samples: &[ReconstructedSample], run: (usize, usize, f64), target: f64) -> f64 {
    let (a, b, sign) = run;
    let seg = &samples[a..=b];
    // partition on the monotone key
    let idx = seg.partition_point(|s| sign * s.energy.re < sign * target).clamp(1, seg.len() - 1);
    let (l, r) = (seg[idx - 1].energy, seg[idx].energy);
    if r.re == l.re {
        return l.im;
    }
    let w = (target - l.re) / (r.re - l.re);
    l.im + w * (r.im - l.im)
}

const SPLITTING_SAMPLES: usize = 64;

/// Lifetime imbalance between forward and backward movers at equal `Re E`.
/// Every pair of monotone runs with opposite direction is compared on a grid
/// spanning their common `Re E` range.
pub fn degeneracy_splitting(rec: &ReconstructedSpectrum) -> SplittingProfile {
    let re: Vec<f64> = rec.samples.iter().map(|s| s.energy.re).collect();
    let runs: Vec<_> = monotone_runs(&re).into_iter().filter(|r| r.1 - r.0 >= 2).collect();
    let mut points = Vec::new();
    for (i, &ra) in runs.iter().enumerate() {
        for &rb in &runs[i + 1..] {
            if ra.2 == rb.2 {
                continue;
            }
            let span = |r: (usize, usize, f64)| {
                let (u, v) = (re[r.0], re[r.1]);
                (u.min(v), u.max(v))
            };
            let (lo_a, hi_a) = span(ra);
            let (lo_b, hi_b) = span(rb);
            let (lo, hi) = (lo_a.max(lo_b), hi_a.min(hi_b));
            if hi <= lo {
                continue;
            }
            for j in 1..SPLITTING_SAMPLES {
                let e = lo + (hi - lo) * j as f64 / SPLITTING_SAMPLES as f64;
                let d = (im_at(&rec.samples, ra, e) - im_at(&rec.samples, rb, e)).abs();
                points.push((e, d));
            }
        }
    }
    let max = points.iter().map(|p| p.1).fold(0.0, f64::max);
    SplittingProfile { points, max }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImCrossing {
    /// Path sample just before the sign change.
    pub index: usize,
    pub k: (f64, f64),
    /// `|Re(E0 - E1)|` at the crossing sample.
    pub re_gap: f64,
}

/// Points on a momentum segment where the two bands exchange the larger
/// imaginary part; reconstruction past such a point is band-ambiguous.
pub fn adiabaticity_report(p: &HoppingParams, path: MomentumPath) -> Vec<ImCrossing> {
    let bp = band_path(p, path);
    bp.im_crossings
        .iter()
        .map(|&j| {
            let gap = |i: usize| (bp.bands[0][i].re - bp.bands[1][i].re).abs();
            let re_gap = if j + 1 < path.samples { gap(j).min(gap(j + 1)) } else { gap(j) };
            ImCrossing { index: j, k: path.raw(j), re_gap }
        })
        .collect()
}
