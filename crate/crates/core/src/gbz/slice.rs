use num_complex::Complex64;

use super::charpoly::{char_poly_along, oblique_bloch, oblique_blocks, stripe_hamiltonian, Oblique};
use super::poly::{middle_gap, sort_by_modulus};
use crate::lattice::HoppingParams;
use crate::linalg::eig2;
use crate::{Error, Result};

/// Default acceptance tolerance on `|ln(|β3|/|β4|)|`.
pub const ROOT_TOLERANCE: f64 = 1e-6;
/// Minimum share of stripe energies that must land on the GBZ.
pub const MIN_ACCEPTED_SHARE: f64 = 0.8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GbzPoint {
    /// Momentum folded in as a parameter (`k-` for the `Plus` direction).
    pub k_param: f64,
    /// Energy on the generalized Brillouin zone.
    pub energy: Complex64,
    /// GBZ variable `β = e^{κ + i k}`.
    pub beta: Complex64,
    /// Root paired with `beta` at the same modulus.
    pub partner: Complex64,
    /// `ln |β|`; positive values accumulate toward the far end of the stripe.
    pub kappa: f64,
    /// Index of the stripe eigenvalue that seeded the point.
    pub seed: usize,
    /// `|ln(|β3|/|β4|)|` of the root list at `energy`.
    pub root_gap: f64,
}

#[derive(Clone, Debug)]
pub struct GbzSlice {
    pub direction: Oblique,
    pub k_param: f64,
    pub stripe_len: usize,
    /// Stripe eigenvalues in solver order.
    pub stripe_energies: Vec<Complex64>,
    /// Right eigenvectors of the stripe, one per energy.
    pub stripe_states: Vec<Vec<Complex64>>,
    pub points: Vec<GbzPoint>,
}

impl GbzSlice {
    pub fn accepted_share(&self) -> f64 {
        self.points.len() as f64 / self.stripe_energies.len().max(1) as f64
    }

    /// Density centroid of stripe state `n` minus the stripe centre, in cells.
    pub fn centroid_offset(&self, n: usize) -> f64 {
        let v = &self.stripe_states[n];
        let total: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let centre = (self.stripe_len as f64 - 1.0) / 2.0;
        let m: f64 = v.iter().enumerate().map(|(i, z)| (i / 2) as f64 * z.norm_sqr()).sum::<f64>() / total;
        m - centre
    }
}

/// Sorted roots of the characteristic polynomial and the middle pair index.
pub(crate) fn roots_at(p: &HoppingParams, dir: Oblique, k_param: f64, e: Complex64) -> Result<(Vec<Complex64>, usize)> {
    let poly = char_poly_along(p, dir, k_param, e)?;
    Ok(poly.sorted_roots())
}

/// Moves a seed energy onto the generalized Brillouin zone at fixed
/// `arg β = theta`.
///
/// With `β = e^{s + iθ}` and `E(s)` the band of `H(β)` continued from the
/// seed, `β` is itself a root of `f(·, E(s))`. It forms the middle pair
/// exactly when its modulus equals the `p`-th smallest modulus among the
/// remaining roots, so the secant solve runs on
/// `q(s) = ln|ρ_p(s)| - s`.
pub(crate) fn refine_at_angle(
    p: &HoppingParams,
    dir: Oblique,
    k_param: f64,
    seed_energy: Complex64,
    seed_log_radius: f64,
    theta: f64,
) -> Option<(Complex64, Complex64, Complex64, f64)> {
    let blocks = oblique_blocks(p, dir, k_param);
    let mut tracked = seed_energy;
    let eval = |s: f64, tracked: &mut Complex64| -> Option<(f64, Complex64, Complex64)> {
        let beta = Complex64::from_polar(s.exp(), theta);
        let (a, b) = eig2(oblique_bloch(&blocks, beta));
        let e = if (a - *tracked).norm() <= (b - *tracked).norm() { a } else { b };
        *tracked = e;
        let (mut roots, pole) = roots_at(p, dir, k_param, e).ok()?;
        if roots.len() < 2 || pole == 0 {
            return None;
        }
        let own = roots
            .iter()
            .enumerate()
            .min_by(|x, y| (x.1 - beta).norm().total_cmp(&(y.1 - beta).norm()))?
            .0;
        roots.remove(own);
        sort_by_modulus(&mut roots);
        let partner = roots[pole - 1];
        Some((partner.norm().ln() - s, e, partner))
    };

    let mut s0 = seed_log_radius;
    let (mut q0, e0, partner0) = eval(s0, &mut tracked)?;
    // near a double root the roots carry O(√ε) noise, so the secant may
    // stall just above zero; keep the best iterate
    let mut best = (q0.abs(), e0, s0, partner0);
    let mut s1 = s0 + if q0 > 0.0 { 1e-3 } else { -1e-3 };
    for _ in 0..80 {
        let (q1, e1, partner) = eval(s1, &mut tracked)?;
        if q1.abs() < best.0 {
            best = (q1.abs(), e1, s1, partner);
        }
        if q1.abs() < 1e-13 {
            break;
        }
        let denom = q1 - q0;
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let step = (-q1 * (s1 - s0) / denom).clamp(-0.2, 0.2);
        if step.abs() < 1e-14 {
            break;
        }
        s0 = s1;
        q0 = q1;
        s1 += step;
    }
    let (q, e, s, partner) = best;
    (q < SECANT_ACCEPT).then(|| (e, Complex64::from_polar(s.exp(), theta), partner, s))
}

/// Largest `|q|` accepted from the secant solve; double roots leave a floor
/// near `1e-8`.
const SECANT_ACCEPT: f64 = 1e-7;

/// One-dimensional generalized Brillouin zone along `x+y` at fixed `k-`.
pub fn gbz_slice(p: &HoppingParams, k_minus: f64, stripe_len: usize) -> Result<GbzSlice> {
    gbz_slice_along(p, Oblique::Plus, k_minus, stripe_len)
}

/// Seeds from the stripe spectrum, projects each energy onto the GBZ at the
/// argument of its third root and keeps points whose refined energy stays
/// close to the stripe value.
pub fn gbz_slice_along(p: &HoppingParams, dir: Oblique, k_param: f64, stripe_len: usize) -> Result<GbzSlice> {
    if stripe_len < 4 {
        return Err(Error::InvalidInput(format!("stripe length {stripe_len} is too short")));
    }
    let h = stripe_hamiltonian(p, dir, k_param, stripe_len);
    let evd = h.eigen().map_err(|e| Error::Numeric(format!("stripe eigendecomposition failed: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let dim = 2 * stripe_len;
    let stripe_energies: Vec<Complex64> = (0..dim).map(|j| s[j]).collect();
    let stripe_states: Vec<Vec<Complex64>> = (0..dim).map(|j| (0..dim).map(|i| u[(i, j)]).collect()).collect();

    // refined energies may drift from the finite-size seed by O(1/L)
    let drift_cap = 4.0 / stripe_len as f64 * (1.0 + p.t_s.abs() + p.t_p.abs() + p.t_sp.abs());
    let mut points = Vec::new();
    for (n, &e) in stripe_energies.iter().enumerate() {
        let (roots, pole) = roots_at(p, dir, k_param, e)?;
        if pole == 0 || pole >= roots.len() {
            continue;
        }
        let (b3, b4) = (roots[pole - 1], roots[pole]);
        let seed_s = 0.5 * (b3.norm().ln() + b4.norm().ln());
        let Some((energy, beta, partner, kappa)) = refine_at_angle(p, dir, k_param, e, seed_s, b3.arg()) else {
            continue;
        };
        if (energy - e).norm() > drift_cap {
            continue;
        }
        let (check, pole) = roots_at(p, dir, k_param, energy)?;
        let root_gap = middle_gap(&check, pole).unwrap_or(f64::INFINITY).abs();
        if root_gap >= ROOT_TOLERANCE {
            continue;
        }
        points.push(GbzPoint { k_param, energy, beta, partner, kappa, seed: n, root_gap });
    }
    let slice = GbzSlice { direction: dir, k_param, stripe_len, stripe_energies, stripe_states, points };
    if slice.accepted_share() < MIN_ACCEPTED_SHARE {
        return Err(Error::GbzAcceptance { accepted: slice.points.len(), total: dim });
    }
    Ok(slice)
}
