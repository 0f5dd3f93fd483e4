use faer::Mat;
use num_complex::Complex64;

use super::LaurentPoly;
use crate::lattice::{HoppingParams, HoppingTable};
use crate::{Error, Result};

/// Oblique stripe direction. `Plus` treats `β+ = e^{ik+}` as the open
/// variable with `β-` folded in as a parameter, `Minus` the reverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Oblique {
    Plus,
    Minus,
}

impl Oblique {
    /// `(variable power, parameter power)` of a lattice displacement.
    fn powers(self, d: (i64, i64)) -> (i32, i32) {
        let plus = (d.0 + d.1) as i32;
        let minus = (d.0 - d.1) as i32;
        match self {
            Oblique::Plus => (plus, minus),
            Oblique::Minus => (minus, plus),
        }
    }
}

/// Coefficient blocks `A_n`, `n ∈ [-2, 2]`, of `H(β) = Σ_n A_n β^n` at fixed
/// parameter momentum. Index `n + 2`.
pub fn oblique_blocks(p: &HoppingParams, dir: Oblique, k_param: f64) -> [[[Complex64; 2]; 2]; 5] {
    let table = HoppingTable::sp_ladder(p);
    let zero = Complex64::new(0.0, 0.0);
    let mut blocks = [[[zero; 2]; 2]; 5];
    for a in 0..2 {
        for b in 0..2 {
            blocks[2][a][b] = table.onsite[a * 2 + b];
        }
    }
    for hop in &table.hops {
        let (n, m) = dir.powers(hop.d);
        let phase = Complex64::from_polar(1.0, k_param * m as f64);
        for a in 0..2 {
            for b in 0..2 {
                blocks[(n + 2) as usize][a][b] += hop.block[a * 2 + b] * phase;
            }
        }
    }
    blocks
}

/// `H(β)` from the oblique blocks.
pub fn oblique_bloch(blocks: &[[[Complex64; 2]; 2]; 5], beta: Complex64) -> [[Complex64; 2]; 2] {
    let zero = Complex64::new(0.0, 0.0);
    let mut m = [[zero; 2]; 2];
    for (i, blk) in blocks.iter().enumerate() {
        let w = beta.powi(i as i32 - 2);
        for a in 0..2 {
            for b in 0..2 {
                m[a][b] += blk[a][b] * w;
            }
        }
    }
    m
}

fn check_main_model(p: &HoppingParams) -> Result<()> {
    p.validate()?;
    if p.delta_y != 0.0 {
        return Err(Error::InvalidInput(
            "oblique generalized Brillouin zone requires delta_y = 0".into(),
        ));
    }
    Ok(())
}

/// `det[H(β) - E]` expanded directly from the matrix entries, as a Laurent
/// polynomial in the open variable.
pub fn char_poly_along(p: &HoppingParams, dir: Oblique, k_param: f64, e: Complex64) -> Result<LaurentPoly> {
    check_main_model(p)?;
    let blocks = oblique_blocks(p, dir, k_param);
    // entry (a, b) as coefficient list over powers -2..=2
    let entry = |a: usize, b: usize| -> [Complex64; 5] {
        let mut c = [Complex64::new(0.0, 0.0); 5];
        for (i, blk) in blocks.iter().enumerate() {
            c[i] = blk[a][b];
        }
        if a == b {
            c[2] -= e;
        }
        c
    };
    let conv = |x: [Complex64; 5], y: [Complex64; 5]| {
        let mut out = [Complex64::new(0.0, 0.0); 9];
        for i in 0..5 {
            for j in 0..5 {
                out[i + j] += x[i] * y[j];
            }
        }
        out
    };
    let d = conv(entry(0, 0), entry(1, 1));
    let o = conv(entry(0, 1), entry(1, 0));
    let full: Vec<Complex64> = d.iter().zip(&o).map(|(a, b)| a - b).collect();
    let scale = full.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    if full[0].norm() > 1e-13 * scale || full[8].norm() > 1e-13 * scale {
        return Err(Error::Numeric("characteristic polynomial exceeds degree three".into()));
    }
    let mut poly = LaurentPoly::zero();
    for n in -3..=3 {
        *poly.coeff_mut(n) = full[(n + 4) as usize];
    }
    Ok(poly)
}

/// `f(β+, E)` at fixed `k-`.
pub fn char_poly(p: &HoppingParams, k_minus: f64, e: Complex64) -> Result<LaurentPoly> {
    char_poly_along(p, Oblique::Plus, k_minus, e)
}

/// The closed-form expansion of `f(β+, E)` in powers of `β+`, written out
/// coefficient by coefficient.
pub fn expanded_char_poly(p: &HoppingParams, k_minus: f64, e: Complex64) -> Result<LaurentPoly> {
    check_main_model(p)?;
    let b = Complex64::from_polar(1.0, k_minus);
    let i = Complex64::new(0.0, 1.0);
    let (ts, tp, tsp, tq, g) = (p.t_s, p.t_p, p.t_sp, p.t_sp_prime, p.gamma);
    let quad = -tp * ts + tsp * tsp + tq * tq;
    let mut f = LaurentPoly::zero();
    *f.coeff_mut(3) = tsp * tq * b;
    *f.coeff_mut(2) = quad * b * b;
    *f.coeff_mut(1) = -e * tp * b + e * ts * b + i * g * ts * b + tsp * tq * b.powi(3) - 2.0 * tsp * tq / b;
    *f.coeff_mut(0) = e * e + i * g * e - 2.0 * tp * ts - 2.0 * tsp * tsp - 2.0 * tq * tq;
    *f.coeff_mut(-1) = -e * tp / b + e * ts / b + i * g * ts / b + tsp * tq / b.powi(3) - 2.0 * tsp * tq * b;
    *f.coeff_mut(-2) = quad / (b * b);
    *f.coeff_mut(-3) = tsp * tq / b;
    Ok(f)
}

/// Dense Hamiltonian of a stripe of `len` cells, open along the chosen
/// oblique direction and Bloch-periodic (momentum `k_param`) across it.
pub fn stripe_hamiltonian(p: &HoppingParams, dir: Oblique, k_param: f64, len: usize) -> Mat<Complex64> {
    let blocks = oblique_blocks(p, dir, k_param);
    let mut h = Mat::<Complex64>::zeros(2 * len, 2 * len);
    for m in 0..len {
        for (i, blk) in blocks.iter().enumerate() {
            let target = m as i64 + i as i64 - 2;
            if target < 0 || target >= len as i64 {
                continue;
            }
            let t = target as usize;
            for a in 0..2 {
                for b in 0..2 {
                    h[(2 * m + a, 2 * t + b)] += blk[a][b];
                }
            }
        }
    }
    h
}
