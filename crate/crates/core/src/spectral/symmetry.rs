use crate::lattice::{build_bloch, HoppingParams, Momentum};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryResiduals {
    /// `max_k ‖σz H(kx, ky) σz - H(-kx, ky)‖`
    pub mirror: f64,
    /// `max_k ‖σz Hᵀ(kx, ky) σz - H(kx, -ky)‖`
    pub transpose_mirror: f64,
}

impl SymmetryResiduals {
    pub fn max(&self) -> f64 {
        self.mirror.max(self.transpose_mirror)
    }
}

/// Entrywise max-norm residuals of the mirror and transpose-mirror relations.
pub fn symmetry_residuals(p: &HoppingParams, ks: &[Momentum]) -> SymmetryResiduals {
    let mut out = SymmetryResiduals { mirror: 0.0, transpose_mirror: 0.0 };
    for &k in ks {
        let h = build_bloch(p, k);
        let mirrored = build_bloch(p, Momentum::new(-k.kx, k.ky));
        let flipped = build_bloch(p, Momentum::new(k.kx, -k.ky));
        out.mirror = out.mirror.max(h.sigma_z_conjugate().max_diff(&mirrored));
        out.transpose_mirror = out.transpose_mirror.max(h.transpose().sigma_z_conjugate().max_diff(&flipped));
    }
    out
}
