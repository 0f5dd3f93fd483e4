use std::collections::{HashMap, VecDeque};
use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Integer unit-cell coordinates `(x, y)`.
pub type Cell = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Square,
    Rotated,
}

/// Open-boundary sample shape.
///
/// `l` is the extent of the axis-aligned bounding box in cells: the side of
/// the square at `theta = 0` and the diagonal of the diamond at `theta = π/4`.
/// A square of side `s` rotated by `theta` has extent `s (cos θ + sin θ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    pub shape: Shape,
    #[serde(default)]
    pub theta: f64,
    #[serde(rename = "L")]
    pub l: usize,
}

impl GeometrySpec {
    pub fn square(l: usize) -> Self {
        Self { shape: Shape::Square, theta: 0.0, l }
    }

    pub fn rotated(theta: f64, l: usize) -> Self {
        Self { shape: Shape::Rotated, theta, l }
    }

    pub fn diamond(l: usize) -> Self {
        Self::rotated(FRAC_PI_4, l)
    }

    /// Rotated square whose side stays close to `side` cells: the extent is
    /// rounded to the nearest integer.
    pub fn fixed_side(theta: f64, side: usize) -> Self {
        let l = (side as f64 * (theta.cos() + theta.sin())).round() as usize;
        Self::rotated(theta, l)
    }

    pub fn side(&self) -> f64 {
        self.l as f64 / (self.theta.cos() + self.theta.sin())
    }
}

/// Ordered set of occupied cells, row-major by `(y, x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometryMask {
    cells: Vec<Cell>,
    index: HashMap<Cell, usize>,
}

impl GeometryMask {
    /// Builds a mask from an arbitrary cell list; duplicates are dropped and
    /// the order is normalised.
    pub fn from_cells(mut cells: Vec<Cell>) -> Self {
        cells.sort_by_key(|&(x, y)| (y, x));
        cells.dedup();
        let index = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Self { cells, index }
    }

    pub fn rectangle(lx: usize, ly: usize) -> Self {
        let cells = (0..ly as i64).flat_map(|y| (0..lx as i64).map(move |x| (x, y))).collect();
        Self::from_cells(cells)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn index_of(&self, cell: Cell) -> Option<usize> {
        self.index.get(&cell).copied()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.index.contains_key(&cell)
    }

    /// Mask indices of the in-mask nearest neighbours of cell `i`.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let (x, y) = self.cells[i];
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .into_iter()
            .filter_map(move |(dx, dy)| self.index_of((x + dx, y + dy)))
    }

    /// Arithmetic mean of the cell coordinates.
    pub fn centroid(&self) -> (f64, f64) {
        let n = self.cells.len().max(1) as f64;
        let (sx, sy) = self.cells.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x as f64, b + y as f64));
        (sx / n, sy / n)
    }

    /// Bounding box `((xmin, ymin), (xmax, ymax))`.
    pub fn bounds(&self) -> (Cell, Cell) {
        let xs = self.cells.iter().map(|c| c.0);
        let ys = self.cells.iter().map(|c| c.1);
        (
            (xs.clone().min().unwrap_or(0), ys.clone().min().unwrap_or(0)),
            (xs.max().unwrap_or(0), ys.max().unwrap_or(0)),
        )
    }

    pub fn is_connected(&self) -> bool {
        if self.cells.is_empty() {
            return true;
        }
        self.component_of(0).iter().all(|&seen| seen)
    }

    fn component_of(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(i) = queue.pop_front() {
            for j in self.neighbors(i) {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen
    }
}

/// Cells of the fixed square lattice whose centres fall inside a square of
/// side `L / (cos θ + sin θ)` rotated clockwise by `θ` about the lattice
/// centre `((L-1)/2, (L-1)/2)`. Points on the lower-left edges are kept, the
/// upper-right edges are excluded; islands not edge-connected to the centre
/// are pruned.
pub fn make_geometry(spec: &GeometrySpec) -> Result<GeometryMask> {
    if spec.l < 3 {
        return Err(Error::InvalidGeometry(format!("L = {} must be at least 3", spec.l)));
    }
    if !(0.0..=FRAC_PI_4 + 1e-12).contains(&spec.theta) {
        return Err(Error::InvalidGeometry(format!("theta = {} outside [0, π/4]", spec.theta)));
    }
    let theta = match spec.shape {
        Shape::Square if spec.theta != 0.0 => {
            return Err(Error::InvalidGeometry("square geometry requires theta = 0".into()))
        }
        Shape::Square => 0.0,
        Shape::Rotated => spec.theta.min(FRAC_PI_4),
    };
    let l = spec.l as i64;
    let centre = (spec.l as f64 - 1.0) / 2.0;
    let half = 0.5 * spec.l as f64 / (theta.cos() + theta.sin());
    let (s, c) = theta.sin_cos();
    const EPS: f64 = 1e-9;
    let inside = |t: f64| t >= -half - EPS && t < half - EPS;

    let mut cells = Vec::new();
    for y in 0..l {
        for x in 0..l {
            let (dx, dy) = (x as f64 - centre, y as f64 - centre);
            let u = dx * c - dy * s;
            let v = dx * s + dy * c;
            if inside(u) && inside(v) {
                cells.push((x, y));
            }
        }
    }
    let full = GeometryMask::from_cells(cells);
    if full.is_empty() {
        return Err(Error::InvalidGeometry("no cell inside the rotated square".into()));
    }
    let seed = (0..full.len())
        .min_by(|&a, &b| {
            let d = |i: usize| {
                let (x, y) = full.cells[i];
                (x as f64 - centre).powi(2) + (y as f64 - centre).powi(2)
            };
            d(a).total_cmp(&d(b))
        })
        .unwrap();
    let keep = full.component_of(seed);
    if keep.iter().all(|&k| k) {
        return Ok(full);
    }
    Ok(GeometryMask::from_cells(
        full.cells.iter().zip(&keep).filter(|(_, &k)| k).map(|(&c, _)| c).collect(),
    ))
}

/// Membership flags over the cells of one mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSet {
    flags: Vec<bool>,
}

impl CellSet {
    pub fn from_flags(flags: Vec<bool>) -> Self {
        Self { flags }
    }

    pub fn contains(&self, index: usize) -> bool {
        self.flags.get(index).copied().unwrap_or(false)
    }

    pub fn count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.flags.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i)
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }
}

/// Union of the outermost `depth` layers of the mask, peeled by graph
/// erosion. Layer 1 holds the cells with fewer than four in-mask neighbours.
pub fn boundary_shell(mask: &GeometryMask, depth: usize) -> Result<CellSet> {
    if depth == 0 {
        return Err(Error::InvalidInput("shell depth must be at least 1".into()));
    }
    let n = mask.len();
    let mut removed = vec![false; n];
    let mut layer: Vec<usize> = (0..n).filter(|&i| mask.neighbors(i).count() < 4).collect();
    for _ in 0..depth {
        if layer.is_empty() {
            break;
        }
        for &i in &layer {
            removed[i] = true;
        }
        let mut next: Vec<usize> =
            layer.iter().flat_map(|&i| mask.neighbors(i)).filter(|&j| !removed[j]).collect();
        next.sort_unstable();
        next.dedup();
        layer = next;
    }
    Ok(CellSet::from_flags(removed))
}
