//! Model zoo: the `sp` ladder and the two reference models used to validate
//! the dynamics, all expressed as hopping tables so that every model shares
//! the same Bloch and real-space builders.

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::lattice::{
    build_periodic, build_real_space, GeometryMask, Hop, HoppingParams, HoppingTable, Momentum, RealSpaceHamiltonian,
};
use crate::linalg::small_eigenpairs;
use crate::{Error, Result};

/// Couplings of the generalized SSH chain
/// `H(k) = [[0, tL + tR' e^{-ik}], [tR + tL' e^{ik}, 0]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SshParams {
    pub t_l: Complex64,
    pub t_r: Complex64,
    pub t_lp: Complex64,
    pub t_rp: Complex64,
}

impl SshParams {
    pub fn real(t_l: f64, t_r: f64, t_lp: f64, t_rp: f64) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        Self { t_l: c(t_l), t_r: c(t_r), t_lp: c(t_lp), t_rp: c(t_rp) }
    }

    /// Two arcs, no skin effect.
    pub fn arcs() -> Self {
        Self::real(12.0 / 11.0, 10.0 / 11.0, -5.0 / 11.0, 6.0 / 11.0)
    }

    /// Single loop, skin effect.
    pub fn single_loop() -> Self {
        Self::real(1.3, 0.7, 1.6, -0.5)
    }

    /// Separable bands with a skin effect.
    pub fn separable_loop() -> Self {
        Self { t_l: Complex64::new(0.0, 1.3), ..Self::real(0.0, 0.7, 0.2, 0.9) }
    }
}

/// Model selection as it appears in configuration files.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Model {
    SpLadder(HoppingParams),
    #[serde(rename = "hatano_nelson_2d")]
    HatanoNelson2d,
    Ssh(SshParams),
}

/// A model together with the hopping table behind both of its builders.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelDescriptor {
    pub name: &'static str,
    pub dimension: usize,
    pub bands: usize,
    pub model: Model,
    pub table: HoppingTable,
}

impl ModelDescriptor {
    pub fn new(model: Model) -> Result<Self> {
        Ok(match model {
            Model::SpLadder(p) => sp_ladder_descriptor(p)?,
            Model::HatanoNelson2d => hn2d_descriptor(),
            Model::Ssh(s) => ssh_descriptor(s)?,
        })
    }

    pub fn bloch(&self, k: Momentum) -> Mat<Complex64> {
        self.table.bloch(k)
    }

    /// Bloch eigenpairs ordered by descending `Im E` (ties by descending
    /// `Re E`), eigenvectors normalized.
    pub fn bands_at(&self, k: Momentum) -> Result<Vec<(Complex64, Vec<Complex64>)>> {
        let mut pairs = small_eigenpairs(&self.bloch(k))?;
        pairs.sort_by(|a, b| {
            if (a.0.im - b.0.im).abs() > 1e-9 {
                b.0.im.total_cmp(&a.0.im)
            } else {
                b.0.re.total_cmp(&a.0.re)
            }
        });
        Ok(pairs)
    }

    pub fn real_space(&self, mask: &GeometryMask) -> RealSpaceHamiltonian {
        build_real_space(&self.table, mask)
    }

    /// Torus of `lx x ly` cells; one-dimensional models use `ly = 1`.
    pub fn periodic(&self, lx: usize, ly: usize) -> RealSpaceHamiltonian {
        build_periodic(&self.table, lx, ly)
    }
}

pub fn sp_ladder_descriptor(p: HoppingParams) -> Result<ModelDescriptor> {
    p.validate()?;
    Ok(ModelDescriptor {
        name: "sp_ladder",
        dimension: 2,
        bands: 2,
        model: Model::SpLadder(p),
        table: HoppingTable::sp_ladder(&p),
    })
}

/// `2 cos kx + i sin ky - i`
pub fn hn2d_bloch(k: Momentum) -> Complex64 {
    Complex64::new(2.0 * k.kx.cos(), k.ky.sin() - 1.0)
}

pub fn hn2d_table() -> HoppingTable {
    let c = |x: f64| vec![Complex64::new(x, 0.0)];
    HoppingTable {
        orbitals: 1,
        onsite: vec![Complex64::new(0.0, -1.0)],
        hops: vec![
            Hop { d: (1, 0), block: c(1.0) },
            Hop { d: (-1, 0), block: c(1.0) },
            // i sin ky = (e^{iky} - e^{-iky}) / 2
            Hop { d: (0, 1), block: c(0.5) },
            Hop { d: (0, -1), block: c(-0.5) },
        ],
    }
}

pub fn hn2d_descriptor() -> ModelDescriptor {
    ModelDescriptor { name: "hatano_nelson_2d", dimension: 2, bands: 1, model: Model::HatanoNelson2d, table: hn2d_table() }
}

pub fn ssh_bloch(s: &SshParams, k: f64) -> [[Complex64; 2]; 2] {
    let zero = Complex64::new(0.0, 0.0);
    let e = Complex64::from_polar(1.0, k);
    [[zero, s.t_l + s.t_rp / e], [s.t_r + s.t_lp * e, zero]]
}

pub fn ssh_table(s: &SshParams) -> HoppingTable {
    let zero = Complex64::new(0.0, 0.0);
    HoppingTable {
        orbitals: 2,
        onsite: vec![zero, s.t_l, s.t_r, zero],
        hops: vec![Hop { d: (1, 0), block: vec![zero, zero, s.t_lp, zero] }, Hop { d: (-1, 0), block: vec![zero, s.t_rp, zero, zero] }],
    }
}

pub fn ssh_descriptor(s: SshParams) -> Result<ModelDescriptor> {
    let all = [s.t_l, s.t_r, s.t_lp, s.t_rp];
    if all.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput("SSH couplings must be finite".into()));
    }
    Ok(ModelDescriptor { name: "ssh", dimension: 1, bands: 2, model: Model::Ssh(s), table: ssh_table(&s) })
}

/// Open chain of `len` cells along `x`.
pub fn chain_mask(len: usize) -> Result<GeometryMask> {
    if len < 2 {
        return Err(Error::InvalidGeometry(format!("chain length {len} is too short")));
    }
    Ok(GeometryMask::rectangle(len, 1))
}
