use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use skinlab::dynamics::bloch_period;
use skinlab::lattice::{GeometrySpec, HoppingParams};
use skinlab::models::{Model, SshParams};
use skinlab::spectral::{BOUNDARY_LAYERS, BULK_MIN_ABS_RE};
use skinlab::wannier::OpticalPotentialSpec;

use crate::failure::Failure;

/// Continuum lattice for the `wannier` subcommand, in recoil units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticalLattice {
    pub vx: f64,
    pub v1: f64,
    pub v2: f64,
    /// Phase in units of π.
    pub phi_over_pi: f64,
    /// Loss written into the emitted ladder parameters.
    #[serde(default)]
    pub gamma: f64,
}

impl OpticalLattice {
    pub fn potential(&self) -> OpticalPotentialSpec {
        OpticalPotentialSpec::new(self.vx, self.v1, self.v2, self.phi_over_pi * PI)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum ModelSection {
    SpLadder(HoppingParams),
    #[serde(rename = "hatano_nelson_2d")]
    HatanoNelson2d,
    Ssh(SshParams),
    OpticalLattice(OpticalLattice),
}

impl ModelSection {
    pub fn lattice_model(&self) -> Option<Model> {
        match *self {
            ModelSection::SpLadder(p) => Some(Model::SpLadder(p)),
            ModelSection::HatanoNelson2d => Some(Model::HatanoNelson2d),
            ModelSection::Ssh(s) => Some(Model::Ssh(s)),
            ModelSection::OpticalLattice(_) => None,
        }
    }

    pub fn ladder(&self) -> Option<HoppingParams> {
        match *self {
            ModelSection::SpLadder(p) => Some(p),
            _ => None,
        }
    }
}

/// Wave-packet drive. `duration` defaults to one Bloch period.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSection {
    pub k0: (f64, f64),
    pub force: (f64, f64),
    #[serde(default = "default_sigma0")]
    pub sigma0: f64,
    #[serde(default)]
    pub band: usize,
    #[serde(default)]
    pub duration: Option<f64>,
    #[serde(default)]
    pub dt: Option<f64>,
}

fn default_sigma0() -> f64 {
    4.5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    pub eigen_cap: usize,
    pub boundary_layers: usize,
    pub bulk_min_abs_re: f64,
    pub kappa_grid: usize,
    pub stripe_len: usize,
    /// `k-` values of the exported GBZ slices.
    pub gbz_slices: Vec<f64>,
    /// Rotation angles in units of π.
    pub thetas_over_pi: Vec<f64>,
    /// Side of the rotated squares in the θ sweep.
    pub sweep_side: usize,
    /// Lattice extent of the per-angle drives in the θ sweep.
    pub sweep_drive_l: usize,
    pub wannier_window: usize,
    pub wannier_spacing: f64,
    pub wannier_iterations: usize,
    pub symmetry_samples: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            eigen_cap: 14000,
            boundary_layers: BOUNDARY_LAYERS,
            bulk_min_abs_re: BULK_MIN_ABS_RE,
            kappa_grid: 64,
            stripe_len: 60,
            gbz_slices: Vec::new(),
            thetas_over_pi: vec![0.0, 1.0 / 16.0, 1.0 / 8.0, 3.0 / 16.0, 1.0 / 4.0],
            sweep_side: 25,
            sweep_drive_l: 57,
            wannier_window: 6,
            wannier_spacing: 2.0 * PI / 64.0,
            wannier_iterations: 6,
            symmetry_samples: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: PathBuf::from(".") }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    #[serde(default)]
    pub geometry: Option<GeometrySpec>,
    #[serde(default)]
    pub drive: Option<DriveSection>,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub output: OutputSection,
}

fn finite(name: &str, v: f64) -> Result<(), Failure> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Failure::config(format!("{name} = {v} is not finite")))
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Failure::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Failure> {
        match &self.model {
            ModelSection::SpLadder(p) => p.validate().map_err(|e| Failure::config(e.to_string()))?,
            ModelSection::OpticalLattice(o) => {
                finite("gamma", o.gamma)?;
                if o.gamma < 0.0 {
                    return Err(Failure::config("gamma must be non-negative"));
                }
                o.potential().validate().map_err(|e| Failure::config(e.to_string()))?
            }
            ModelSection::HatanoNelson2d | ModelSection::Ssh(_) => {}
        }
        if let Some(g) = &self.geometry {
            finite("geometry.theta", g.theta)?;
            if g.l == 0 {
                return Err(Failure::config("geometry.L must be positive"));
            }
        }
        if let Some(d) = &self.drive {
            for (name, v) in [("k0", d.k0.0), ("k0", d.k0.1), ("force", d.force.0), ("force", d.force.1)] {
                finite(name, v)?;
            }
            if !(d.sigma0.is_finite() && d.sigma0 > 0.0) {
                return Err(Failure::config(format!("sigma0 = {} must be positive", d.sigma0)));
            }
            if d.band > 1 {
                return Err(Failure::config(format!("band = {} must be 0 or 1", d.band)));
            }
            for (name, v) in [("duration", d.duration), ("dt", d.dt)] {
                if let Some(v) = v {
                    if !(v.is_finite() && v > 0.0) {
                        return Err(Failure::config(format!("{name} = {v} must be positive")));
                    }
                }
            }
            if d.duration.is_none() && bloch_period(d.force).is_err() {
                return Err(Failure::config("force has no Bloch period; set drive.duration"));
            }
        }
        let n = &self.numerics;
        if n.eigen_cap == 0 || n.boundary_layers == 0 || n.sweep_side == 0 || n.sweep_drive_l == 0 {
            return Err(Failure::config("eigen_cap, boundary_layers, sweep_side and sweep_drive_l must be positive"));
        }
        if n.kappa_grid < 32 {
            return Err(Failure::config(format!("kappa_grid = {} must be at least 32", n.kappa_grid)));
        }
        if n.stripe_len < 4 {
            return Err(Failure::config(format!("stripe_len = {} must be at least 4", n.stripe_len)));
        }
        if n.symmetry_samples == 0 || n.wannier_window == 0 || n.wannier_iterations == 0 {
            return Err(Failure::config("symmetry_samples, wannier_window and wannier_iterations must be positive"));
        }
        if !(n.wannier_spacing.is_finite() && n.wannier_spacing > 0.0) {
            return Err(Failure::config("wannier_spacing must be positive"));
        }
        finite("bulk_min_abs_re", n.bulk_min_abs_re)?;
        for &v in n.gbz_slices.iter().chain(&n.thetas_over_pi) {
            finite("numerics", v)?;
        }
        if n.thetas_over_pi.iter().any(|t| !(0.0..=0.25).contains(t)) {
            return Err(Failure::config("thetas_over_pi must lie in [0, 1/4]"));
        }
        Ok(())
    }

    /// First 12 hex digits of the SHA-256 of the resolved config. The output
    /// directory is left out so that a moved run keeps its file names.
    pub fn hash(&self, subcommand: &str) -> String {
        let physics = RunConfig { output: OutputSection::default(), ..self.clone() };
        let mut h = Sha256::new();
        h.update(subcommand.as_bytes());
        h.update([0]);
        h.update(serde_json::to_vec(&physics).expect("config serializes"));
        h.finalize().iter().take(6).map(|b| format!("{b:02x}")).collect()
    }
}
