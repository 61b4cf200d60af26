//! Box grid `[−R, R]³` with a masked unit sphere and padded staggered
//! storage.
//!
//! Every array has `(n+2)³` entries. Along its own axis a face array of
//! component `d` stores face index `0..=n` directly; along the other axes
//! and for cell arrays, entry `i` holds cell `i − 1`, so entries `0` and
//! `n + 1` are ghost cells outside the box.

use crate::error::{Error, Result};
use crate::Vec3d;

/// Radius of the particle.
pub const SPHERE_RADIUS: f64 = 1.0;
/// Smallest accepted number of cells per axis.
pub const MIN_CELLS: usize = 32;
/// Smallest accepted half-width of the box.
pub const MIN_HALF_WIDTH: f64 = 4.0;
/// Smallest accepted number of cells across the sphere diameter.
pub const MIN_CELLS_ACROSS: f64 = 6.0;

/// Classification of a cell by its centre.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    /// Centre inside the particle.
    Solid,
    /// Interior fluid cell.
    Fluid,
    /// Fluid cell touching the box.
    Boundary,
}

/// Which staggered array a position refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stagger {
    /// Normal velocity on faces orthogonal to the given axis.
    Face(usize),
    /// Cell centres (pressure).
    Cell,
}

/// Uniform staggered grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    /// Half-width `R` of the box.
    pub half_width: f64,
    /// Cells per axis.
    pub n: usize,
    /// Cell size `2R/n`.
    pub h: f64,
}

/// Checks the resolution guards and builds the grid.
pub fn build_grid(half_width: f64, n: usize) -> Result<Grid> {
    if !(half_width >= MIN_HALF_WIDTH) {
        return Err(Error::InvalidInput(format!(
            "box half-width {half_width} is below {MIN_HALF_WIDTH}"
        )));
    }
    if n < MIN_CELLS || n % 2 != 0 {
        return Err(Error::Resolution(format!(
            "{n} cells per axis; need an even count of at least {MIN_CELLS}"
        )));
    }
    let grid = Grid::raw(half_width, n);
    let across = 2.0 * SPHERE_RADIUS / grid.h;
    if across < MIN_CELLS_ACROSS - 1e-9 {
        return Err(Error::Resolution(format!(
            "sphere spans {across:.2} cells, need {MIN_CELLS_ACROSS}"
        )));
    }
    Ok(grid)
}

impl Grid {
    /// Grid without guards; used for coarse multigrid levels.
    pub(crate) fn raw(half_width: f64, n: usize) -> Self {
        Self {
            half_width,
            n,
            h: 2.0 * half_width / n as f64,
        }
    }

    /// Entries per axis including padding.
    pub fn padded(&self) -> usize {
        self.n + 2
    }

    /// Entries per array.
    pub fn len(&self) -> usize {
        self.padded().pow(3)
    }

    /// Always false; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat-index strides.
    pub fn strides(&self) -> [usize; 3] {
        let p = self.padded();
        [p * p, p, 1]
    }

    /// Flat index of a padded triple.
    pub fn index(&self, i: [usize; 3]) -> usize {
        let p = self.padded();
        (i[0] * p + i[1]) * p + i[2]
    }

    /// Padded triple of a flat index.
    pub fn triple(&self, idx: usize) -> [usize; 3] {
        let p = self.padded();
        [idx / (p * p), (idx / p) % p, idx % p]
    }

    /// Coordinate of entry `i` along `axis` of a `stagger` array.
    pub fn coord(&self, stagger: Stagger, axis: usize, i: usize) -> f64 {
        let shift = match stagger {
            Stagger::Face(d) if d == axis => 0.0,
            _ => -0.5,
        };
        -self.half_width + (i as f64 + shift) * self.h
    }

    /// Position of a padded entry.
    pub fn position(&self, stagger: Stagger, i: [usize; 3]) -> Vec3d {
        Vec3d::from_fn(|a| self.coord(stagger, a, i[a]))
    }

    /// Kind of cell `c` (unpadded indices `0..n`).
    pub fn cell_kind(&self, c: [usize; 3]) -> CellKind {
        let x = self.position(Stagger::Cell, [c[0] + 1, c[1] + 1, c[2] + 1]);
        if x.norm() <= SPHERE_RADIUS {
            CellKind::Solid
        } else if c.iter().any(|&i| i == 0 || i + 1 == self.n) {
            CellKind::Boundary
        } else {
            CellKind::Fluid
        }
    }

    /// Number of cells whose centre lies outside the particle.
    pub fn fluid_cell_count(&self) -> usize {
        let n = self.n;
        let mut count = 0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.cell_kind([i, j, k]) != CellKind::Solid {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    /// True when the padded face entry of component `d` is an unknown:
    /// inside the box and outside the particle.
    pub fn face_active(&self, d: usize, i: [usize; 3]) -> bool {
        let n = self.n;
        for (a, &ia) in i.iter().enumerate() {
            let ok = if a == d { ia >= 1 && ia < n } else { ia >= 1 && ia <= n };
            if !ok {
                return false;
            }
        }
        self.position(Stagger::Face(d), i).norm() > SPHERE_RADIUS
    }

    /// True for face entries on the box boundary (Dirichlet data).
    pub fn face_on_box(&self, d: usize, i: [usize; 3]) -> bool {
        let n = self.n;
        (i[d] == 0 || i[d] == n) && (0..3).filter(|&a| a != d).all(|a| i[a] >= 1 && i[a] <= n)
    }

    /// True for padded entries that hold real cells.
    pub fn cell_inside(&self, i: [usize; 3]) -> bool {
        i.iter().all(|&c| c >= 1 && c <= self.n)
    }
}

/// Distance from `x` along `sign·e_axis` to the unit sphere, when the
/// segment of length `h` enters it.
pub(crate) fn sphere_hit(x: &Vec3d, axis: usize, sign: f64, h: f64) -> Option<f64> {
    let end = *x + Vec3d::unit(axis).scale(sign * h);
    if end.norm() > SPHERE_RADIUS {
        return None;
    }
    let xa = x[axis];
    let c = x.norm_sq() - SPHERE_RADIUS * SPHERE_RADIUS;
    let disc = (xa * xa - c).max(0.0);
    let t = -sign * xa - disc.sqrt();
    Some(t.clamp(0.0, h))
}
