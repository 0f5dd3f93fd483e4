use std::f64::consts::PI;

use super::charpoly::Oblique;
use super::slice::{gbz_slice_along, refine_at_angle, GbzPoint};
use crate::lattice::HoppingParams;
use crate::{Error, Result};

/// Inverse localization length on a `grid_n x grid_n` momentum grid with
/// `k = -π + 2π j / grid_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct KappaField {
    pub direction: Oblique,
    pub grid_n: usize,
    /// Row-major over `(i_plus, i_minus)`; `NaN` where no GBZ point was found.
    pub values: Vec<f64>,
    /// Parameter gridlines whose stripe failed the acceptance rule.
    pub failed_lines: Vec<usize>,
}

impl KappaField {
    pub fn momentum(&self, i: usize) -> f64 {
        grid_momentum(self.grid_n, i)
    }

    /// `κ(k+ = grid[i_plus], k- = grid[i_minus])`
    pub fn get(&self, i_plus: usize, i_minus: usize) -> f64 {
        self.values[i_plus * self.grid_n + i_minus]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().filter(|v| v.is_finite()).map(|v| v.abs()).fold(0.0, f64::max)
    }
}

fn grid_momentum(n: usize, i: usize) -> f64 {
    -PI + 2.0 * PI * i as f64 / n as f64
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// κ+ over the `(k+, k-)` grid: one stripe per `k-` gridline.
pub fn kappa_map(p: &HoppingParams, grid_n: usize, stripe_len: usize) -> Result<KappaField> {
    kappa_map_along(p, Oblique::Plus, grid_n, stripe_len)
}

/// κ along either oblique direction. Each parameter gridline runs a stripe,
/// and each open-variable gridpoint is refined from the accepted stripe
/// point whose `arg β` (or partner argument) lies nearest.
pub fn kappa_map_along(p: &HoppingParams, dir: Oblique, grid_n: usize, stripe_len: usize) -> Result<KappaField> {
    if grid_n < 32 {
        return Err(Error::InvalidInput(format!("grid_n = {grid_n} must be at least 32")));
    }
    let mut values = vec![f64::NAN; grid_n * grid_n];
    let mut failed_lines = Vec::new();
    for line in 0..grid_n {
        let k_param = grid_momentum(grid_n, line);
        let slice = match gbz_slice_along(p, dir, k_param, stripe_len) {
            Ok(s) => s,
            Err(Error::GbzAcceptance { .. }) => {
                failed_lines.push(line);
                continue;
            }
            Err(e) => return Err(e),
        };
        let candidates: Vec<(f64, &GbzPoint)> = slice
            .points
            .iter()
            .flat_map(|pt| [(pt.beta.arg(), pt), (pt.partner.arg(), pt)])
            .collect();
        for j in 0..grid_n {
            let theta = grid_momentum(grid_n, j);
            let mut order: Vec<&(f64, &GbzPoint)> = candidates.iter().collect();
            order.sort_by(|a, b| {
                circular_distance(a.0, theta)
                    .total_cmp(&circular_distance(b.0, theta))
                    .then(a.1.energy.re.total_cmp(&b.1.energy.re))
                    .then(a.1.energy.im.total_cmp(&b.1.energy.im))
            });
            let found = order.iter().take(8).find_map(|(_, pt)| {
                refine_at_angle(p, dir, k_param, pt.energy, pt.kappa, theta).map(|r| r.3)
            });
            if let Some(kappa) = found {
                let (i_plus, i_minus) = match dir {
                    Oblique::Plus => (j, line),
                    Oblique::Minus => (line, j),
                };
                values[i_plus * grid_n + i_minus] = kappa;
            }
        }
    }
    Ok(KappaField { direction: dir, grid_n, values, failed_lines })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plus_and_minus_fields_are_transposes() {
        let p = HoppingParams::main_text();
        let plus = kappa_map(&p, 32, 40).unwrap();
        let minus = kappa_map_along(&p, Oblique::Minus, 32, 40).unwrap();
        assert!(plus.failed_lines.is_empty() && minus.failed_lines.is_empty());
        for a in 0..32 {
            for b in 0..32 {
                let (x, y) = (plus.get(a, b), minus.get(b, a));
                assert!(x.is_finite() && y.is_finite(), "missing ({a}, {b})");
                assert!((x - y).abs() < 1e-6, "({a}, {b}): {x} vs {y}");
            }
        }
        assert!(plus.max_abs() > 0.1);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let p = HoppingParams::main_text();
        assert!(kappa_map(&p, 16, 40).is_err());
    }
}
