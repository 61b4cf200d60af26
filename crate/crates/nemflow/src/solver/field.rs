//! Staggered velocity/pressure fields and their interpolation.

use super::grid::{Grid, Stagger, SPHERE_RADIUS};
use crate::error::{Error, Result};
use crate::{GammaSetd, Mat3d, Vec3d};

/// Values on the three face arrays (padded layout).
#[derive(Clone, Debug, PartialEq)]
pub struct FaceField(pub [Vec<f64>; 3]);

impl FaceField {
    /// All zeros.
    pub fn zeros(grid: &Grid) -> Self {
        Self([vec![0.0; grid.len()], vec![0.0; grid.len()], vec![0.0; grid.len()]])
    }

    /// `f(d, x)` on every face that is an unknown.
    pub fn from_fn(grid: &Grid, mut f: impl FnMut(usize, &Vec3d) -> Result<f64>) -> Result<Self> {
        let mut out = Self::zeros(grid);
        for d in 0..3 {
            for i in 0..grid.len() {
                let t = grid.triple(i);
                if grid.face_active(d, t) {
                    out.0[d][i] = f(d, &grid.position(Stagger::Face(d), t))?;
                }
            }
        }
        Ok(out)
    }

    /// `f(x)` componentwise on every unknown face.
    pub fn from_vector_fn(grid: &Grid, mut f: impl FnMut(&Vec3d) -> Result<Vec3d>) -> Result<Self> {
        Self::from_fn(grid, |d, x| Ok(f(x)?[d]))
    }

    /// Largest magnitude.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// True when every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|&v| v == 0.0)
    }
}

/// Solution of a grid solve.
///
/// Face arrays include box values, zero values inside the particle and
/// ghost values `2v_wall − v_inner` outside the box.
#[derive(Clone, Debug)]
pub struct FlowField {
    /// Grid.
    pub grid: Grid,
    /// Face velocities per component.
    pub u: [Vec<f64>; 3],
    /// Cell pressures with zero mean over active cells.
    pub p: Vec<f64>,
    /// Cells carrying a pressure unknown.
    pub p_active: Vec<bool>,
    /// Far-field velocity of the scenario.
    pub v_star: Vec3d,
    /// Relative residuals of the last linear solve.
    pub linear_history: Vec<f64>,
    /// Relative Picard updates.
    pub picard_history: Vec<f64>,
    /// Picard iterations used.
    pub picard_iterations: usize,
    /// Viscosity ratios used.
    pub gamma: Option<GammaSetd>,
}

/// Trilinear stencil: eight flat indices and weights.
fn stencil(grid: &Grid, stagger: Stagger, x: &Vec3d) -> ([usize; 8], [f64; 8], [usize; 3]) {
    let p = grid.padded();
    let mut base = [0usize; 3];
    let mut t = [0.0; 3];
    for a in 0..3 {
        let shift = match stagger {
            Stagger::Face(d) if d == a => 0.0,
            _ => 0.5,
        };
        let s = (x[a] + grid.half_width) / grid.h + shift;
        let hi = match stagger {
            Stagger::Face(d) if d == a => grid.n - 1,
            _ => p - 2,
        };
        let i0 = (s.floor().max(0.0) as usize).min(hi);
        base[a] = i0;
        t[a] = (s - i0 as f64).clamp(0.0, 1.0);
    }
    let mut idx = [0usize; 8];
    let mut w = [0.0; 8];
    for c in 0..8 {
        let o = [(c >> 2) & 1, (c >> 1) & 1, c & 1];
        idx[c] = grid.index([base[0] + o[0], base[1] + o[1], base[2] + o[2]]);
        w[c] = (0..3).map(|a| if o[a] == 1 { t[a] } else { 1.0 - t[a] }).product();
    }
    (idx, w, base)
}

impl FlowField {
    /// Velocity by trilinear interpolation; zero inside the particle.
    pub fn velocity_at(&self, x: &Vec3d) -> Vec3d {
        if x.norm() <= SPHERE_RADIUS {
            return Vec3d::zero();
        }
        Vec3d::from_fn(|d| {
            let (idx, w, _) = stencil(&self.grid, Stagger::Face(d), x);
            idx.iter().zip(&w).map(|(&i, &wi)| wi * self.u[d][i]).sum()
        })
    }

    /// Velocity at a cell centre (padded flat index).
    pub fn cell_velocity(&self, c: usize) -> Vec3d {
        let st = self.grid.strides();
        Vec3d::from_fn(|d| 0.5 * (self.u[d][c] + self.u[d][c - st[d]]))
    }

    /// `(∇v)_ij = ∂_j v_i` at a cell centre (padded flat index).
    pub fn cell_gradient(&self, c: usize) -> Mat3d {
        let st = self.grid.strides();
        let h = self.grid.h;
        let avg = |d: usize, i: usize| 0.5 * (self.u[d][i] + self.u[d][i - st[d]]);
        Mat3d::from_fn(|d, a| {
            if a == d {
                (self.u[d][c] - self.u[d][c - st[d]]) / h
            } else {
                (avg(d, c + st[a]) - avg(d, c - st[a])) / (2.0 * h)
            }
        })
    }

    fn check_fluid(&self, idx: &[usize; 8], what: &'static str) -> Result<()> {
        for &i in idx {
            let xc = self.grid.position(Stagger::Cell, self.grid.triple(i));
            if xc.norm() <= SPHERE_RADIUS {
                return Err(Error::Domain {
                    what,
                    radius: xc.norm(),
                });
            }
        }
        Ok(())
    }

    /// Velocity gradient interpolated from cell centres; every stencil
    /// cell must lie in the fluid and inside the box.
    pub fn gradient_at(&self, x: &Vec3d) -> Result<Mat3d> {
        let (idx, w, _) = stencil(&self.grid, Stagger::Cell, x);
        self.check_fluid(&idx, "gradient interpolation reaches solid cells")?;
        let n = self.grid.n;
        let mut g = Mat3d::zero();
        for (&i, &wi) in idx.iter().zip(&w) {
            let t = self.grid.triple(i);
            if t.iter().any(|&c| c < 1 || c > n) {
                return Err(Error::Domain {
                    what: "gradient interpolation leaves the box",
                    radius: x.norm(),
                });
            }
            g += self.cell_gradient(i).scale(wi);
        }
        Ok(g)
    }

    /// Pressure interpolated from cell centres in the fluid.
    pub fn pressure_at(&self, x: &Vec3d) -> Result<f64> {
        let (idx, w, _) = stencil(&self.grid, Stagger::Cell, x);
        self.check_fluid(&idx, "pressure interpolation reaches solid cells")?;
        if idx.iter().any(|&i| !self.p_active[i]) {
            return Err(Error::Domain {
                what: "pressure interpolation leaves the box",
                radius: x.norm(),
            });
        }
        Ok(idx.iter().zip(&w).map(|(&i, &wi)| wi * self.p[i]).sum())
    }

    /// Largest `|div v|·h` over active cells divided by the velocity scale.
    pub fn max_divergence(&self) -> f64 {
        let st = self.grid.strides();
        let scale = self.max_velocity().max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for c in 0..self.grid.len() {
            if !self.p_active[c] {
                continue;
            }
            let div: f64 = (0..3).map(|d| self.u[d][c] - self.u[d][c - st[d]]).sum();
            worst = worst.max(div.abs());
        }
        worst / scale
    }

    /// Largest face velocity magnitude.
    pub fn max_velocity(&self) -> f64 {
        self.u.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `self − other` on the same grid; histories are dropped.
    pub fn difference(&self, other: &FlowField) -> Result<FlowField> {
        if self.grid != other.grid {
            return Err(Error::InvalidInput("fields live on different grids".into()));
        }
        let sub = |a: &Vec<f64>, b: &Vec<f64>| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<f64>>();
        Ok(FlowField {
            grid: self.grid.clone(),
            u: [sub(&self.u[0], &other.u[0]), sub(&self.u[1], &other.u[1]), sub(&self.u[2], &other.u[2])],
            p: sub(&self.p, &other.p),
            p_active: self.p_active.clone(),
            v_star: self.v_star - other.v_star,
            linear_history: Vec::new(),
            picard_history: Vec::new(),
            picard_iterations: 0,
            gamma: None,
        })
    }

    /// Largest velocity difference over faces outside the particle.
    pub fn max_velocity_difference(&self, other: &FlowField) -> Result<f64> {
        Ok(self.difference(other)?.max_velocity())
    }
}
