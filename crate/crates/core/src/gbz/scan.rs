use std::f64::consts::PI;

use crate::lattice::HoppingParams;
use crate::spectral::{bounding_grid, total_winding_map, MomentumLoop};
use crate::Result;

/// Largest determinant winding found along one straight loop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathWinding {
    /// The fixed momentum component.
    pub fixed: f64,
    pub max_winding: i64,
    /// Base energies that gave a well-conditioned integer.
    pub base_points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkinPhase {
    /// No winding along either lattice axis.
    GeometryDependent,
    /// Winding along `kx` only.
    LineX,
    /// Winding along `ky` only.
    LineY,
    /// Winding along both axes.
    Both,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WindingScan {
    pub along_kx: Vec<PathWinding>,
    pub along_ky: Vec<PathWinding>,
    pub phase: SkinPhase,
}

pub const SCAN_MOMENTA: [f64; 5] = [-PI, -PI / 2.0, 0.0, 0.1 * PI, PI / 2.0];
const GRID: usize = 48;
const SAMPLES: usize = 4096;

fn scan_path(p: &HoppingParams, lp: MomentumLoop, fixed: f64) -> PathWinding {
    let bases = bounding_grid(p, &lp, GRID);
    let results = total_winding_map(p, &lp, &bases, SAMPLES);
    let mut max_winding = 0i64;
    let mut used = 0;
    for w in results.into_iter().flatten() {
        used += 1;
        if w.abs() > max_winding.abs() {
            max_winding = w;
        }
    }
    PathWinding { fixed, max_winding, base_points: used }
}

/// Determinant windings along `kx` (at several fixed `ky`) and along `ky`
/// (at several fixed `kx`) over a grid of base energies, and the skin-effect
/// class they imply.
pub fn straight_direction_winding_scan(p: &HoppingParams) -> Result<WindingScan> {
    p.validate()?;
    let along_kx = SCAN_MOMENTA.iter().map(|&ky| scan_path(p, MomentumLoop::along_kx(ky), ky)).collect::<Vec<_>>();
    let along_ky = SCAN_MOMENTA.iter().map(|&kx| scan_path(p, MomentumLoop::along_ky(kx), kx)).collect::<Vec<_>>();
    let x = along_kx.iter().any(|w| w.max_winding != 0);
    let y = along_ky.iter().any(|w| w.max_winding != 0);
    let phase = match (x, y) {
        (false, false) => SkinPhase::GeometryDependent,
        (true, false) => SkinPhase::LineX,
        (false, true) => SkinPhase::LineY,
        (true, true) => SkinPhase::Both,
    };
    Ok(WindingScan { along_kx, along_ky, phase })
}
