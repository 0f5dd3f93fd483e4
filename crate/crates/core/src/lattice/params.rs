use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Couplings of the `sp` ladder, energies in units of `t_s` unless produced
/// by the Wannier fit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoppingParams {
    pub t_s: f64,
    pub t_p: f64,
    pub t_sp: f64,
    pub t_sp_prime: f64,
    /// Loss rate on the `p_x` orbital.
    pub gamma: f64,
    /// Intra-cell `s`-`p_x` tunneling through `σ_y`.
    #[serde(default)]
    pub delta_y: f64,
}

impl HoppingParams {
    /// `t_s = t_p = t_sp = 1`, `t'_sp = 0.5`, `γ = 0.5`.
    pub fn main_text() -> Self {
        Self { t_s: 1.0, t_p: 1.0, t_sp: 1.0, t_sp_prime: 0.5, gamma: 0.5, delta_y: 0.0 }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    pub fn with_delta_y(self, delta_y: f64) -> Self {
        Self { delta_y, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("t_s", self.t_s),
            ("t_p", self.t_p),
            ("t_sp", self.t_sp),
            ("t_sp_prime", self.t_sp_prime),
            ("gamma", self.gamma),
            ("delta_y", self.delta_y),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("{name} = {v} is not finite")));
        }
        if self.gamma < 0.0 {
            return Err(Error::InvalidInput(format!("gamma = {} must be non-negative", self.gamma)));
        }
        Ok(())
    }

    pub fn is_hermitian(&self) -> bool {
        self.gamma == 0.0
    }
}

impl Default for HoppingParams {
    fn default() -> Self {
        Self::main_text()
    }
}
