//! Saddle-point system of the isotropic Stokes problem and its
//! preconditioned MINRES solve.

use super::field::{FaceField, FlowField};
use super::grid::{Grid, Stagger};
use super::mg::{Dirichlet, VCycle};
use crate::error::{Error, Result};
use crate::Vec3d;

/// Linear-solver settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearOptions {
    /// Relative algebraic residual `‖b − Kx‖/‖b‖`.
    pub tol: f64,
    /// Iteration budget across restarts.
    pub max_iter: usize,
}

impl Default for LinearOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 3000 }
    }
}

/// Discrete `[A Bᵀ; B 0]` with MAC gradient and divergence and the
/// immersed-sphere velocity Laplacian, plus its block preconditioner.
pub struct StokesSystem {
    grid: Grid,
    mg: Vec<VCycle>,
    dirichlet: Vec<Vec<Dirichlet>>,
    p_active: Vec<bool>,
    face_active: Vec<Vec<bool>>,
}

impl StokesSystem {
    /// Assembles the operators for `grid`.
    pub fn new(grid: &Grid) -> Self {
        let mut mg = Vec::new();
        let mut dirichlet = Vec::new();
        for d in 0..3 {
            let (v, dl) = VCycle::new(grid, d);
            mg.push(v);
            dirichlet.push(dl);
        }
        let face_active: Vec<Vec<bool>> = mg.iter().map(|m| m.fine().active.clone()).collect();
        let st = grid.strides();
        let mut p_active = vec![false; grid.len()];
        for (c, pa) in p_active.iter_mut().enumerate() {
            if !grid.cell_inside(grid.triple(c)) {
                continue;
            }
            *pa = (0..3).any(|d| face_active[d][c] || face_active[d][c - st[d]]);
        }
        Self {
            grid: grid.clone(),
            mg,
            dirichlet,
            p_active,
            face_active,
        }
    }

    /// The grid.
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Active pressure cells.
    pub fn pressure_active(&self) -> &[bool] {
        &self.p_active
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let len = self.grid.len();
        let st = self.grid.strides();
        let ih = 1.0 / self.grid.h;
        let (xu, xp) = x.split_at(3 * len);
        let (yu, yp) = y.split_at_mut(3 * len);
        for d in 0..3 {
            let xd = &xu[d * len..(d + 1) * len];
            let yd = &mut yu[d * len..(d + 1) * len];
            self.mg[d].fine().apply(xd, yd);
            let act = &self.face_active[d];
            for i in 0..len {
                if act[i] {
                    yd[i] += (xp[i + st[d]] - xp[i]) * ih;
                }
            }
        }
        for c in 0..len {
            if !self.p_active[c] {
                yp[c] = xp[c];
                continue;
            }
            let mut div = 0.0;
            for d in 0..3 {
                let act = &self.face_active[d];
                let xd = &xu[d * len..(d + 1) * len];
                if act[c] {
                    div += xd[c];
                }
                if act[c - st[d]] {
                    div -= xd[c - st[d]];
                }
            }
            yp[c] = -div * ih;
        }
    }

    fn precondition(&mut self, r: &[f64], z: &mut [f64]) {
        let len = self.grid.len();
        for d in 0..3 {
            self.mg[d].apply(&r[d * len..(d + 1) * len], &mut z[d * len..(d + 1) * len]);
        }
        for c in 0..len {
            z[3 * len + c] = if self.p_active[c] { r[3 * len + c] } else { 0.0 };
        }
    }

    /// Right-hand side for body force `rhs` and outer data `bc`.
    fn assemble(&self, rhs: &FaceField, bc: &dyn Fn(&Vec3d) -> Vec3d) -> Vec<f64> {
        let g = &self.grid;
        let len = g.len();
        let st = g.strides();
        let mut b = vec![0.0; 4 * len];
        for d in 0..3 {
            let act = &self.face_active[d];
            for i in 0..len {
                if act[i] {
                    b[d * len + i] = rhs.0[d][i];
                }
            }
            for dl in &self.dirichlet[d] {
                if !dl.on_sphere {
                    b[d * len + dl.node] += dl.coef * bc(&dl.point)[d];
                }
            }
        }
        let ih = 1.0 / g.h;
        let mut sum = 0.0;
        let mut count = 0usize;
        for c in 0..len {
            if !self.p_active[c] {
                continue;
            }
            let t = g.triple(c);
            let mut div = 0.0;
            for d in 0..3 {
                let mut lo = t;
                lo[d] -= 1;
                if g.face_on_box(d, t) {
                    div += bc(&g.position(Stagger::Face(d), t))[d];
                }
                if g.face_on_box(d, lo) {
                    div -= bc(&g.position(Stagger::Face(d), lo))[d];
                }
                let _ = st;
            }
            b[3 * len + c] = div * ih;
            sum += div * ih;
            count += 1;
        }
        let mean = sum / count.max(1) as f64;
        for c in 0..len {
            if self.p_active[c] {
                b[3 * len + c] -= mean;
            }
        }
        b
    }

    /// Solves `−Δv + ∇p = rhs`, `div v = 0` with `v = 0` on the sphere and
    /// `v = bc` on the box.
    pub fn solve(&mut self, rhs: &FaceField, bc: &dyn Fn(&Vec3d) -> Vec3d, v_star: Vec3d, opts: &LinearOptions) -> Result<FlowField> {
        let b = self.assemble(rhs, bc);
        let (x, history) = self.minres(&b, opts)?;
        Ok(self.field(&x, bc, v_star, history))
    }

    fn field(&self, x: &[f64], bc: &dyn Fn(&Vec3d) -> Vec3d, v_star: Vec3d, history: Vec<f64>) -> FlowField {
        let g = &self.grid;
        let len = g.len();
        let n = g.n;
        let mut u: Vec<Vec<f64>> = Vec::new();
        for d in 0..3 {
            let act = &self.face_active[d];
            let mut ud = vec![0.0; len];
            for i in 0..len {
                let t = g.triple(i);
                if act[i] {
                    ud[i] = x[d * len + i];
                } else if g.face_on_box(d, t) {
                    ud[i] = bc(&g.position(Stagger::Face(d), t))[d];
                }
            }
            u.push(ud);
        }
        let st = g.strides();
        for (d, ud) in u.iter_mut().enumerate() {
            for i in 0..len {
                let t = g.triple(i);
                if t[d] > n {
                    continue;
                }
                for a in (0..3).filter(|&a| a != d) {
                    let b = 3 - a - d;
                    if t[b] < 1 || t[b] > n {
                        continue;
                    }
                    let inner = if t[a] == 0 {
                        i + st[a]
                    } else if t[a] == n + 1 {
                        i - st[a]
                    } else {
                        continue;
                    };
                    let xg = g.position(Stagger::Face(d), t);
                    let xi = g.position(Stagger::Face(d), g.triple(inner));
                    let wall = (xg + xi).scale(0.5);
                    ud[i] = 2.0 * bc(&wall)[d] - ud[inner];
                }
            }
        }
        let mut p = vec![0.0; len];
        let mut sum = 0.0;
        let mut count = 0usize;
        for c in 0..len {
            if self.p_active[c] {
                sum += x[3 * len + c];
                count += 1;
            }
        }
        let mean = sum / count.max(1) as f64;
        for c in 0..len {
            if self.p_active[c] {
                p[c] = x[3 * len + c] - mean;
            }
        }
        let [u0, u1, u2]: [Vec<f64>; 3] = u.try_into().expect("three components");
        FlowField {
            grid: g.clone(),
            u: [u0, u1, u2],
            p,
            p_active: self.p_active.clone(),
            v_star,
            linear_history: history,
            picard_history: Vec::new(),
            picard_iterations: 0,
            gamma: None,
        }
    }

    /// Preconditioned MINRES with restarts on the true residual.
    fn minres(&mut self, b: &[f64], opts: &LinearOptions) -> Result<(Vec<f64>, Vec<f64>)> {
        let m = b.len();
        let bnorm = norm(b);
        let mut x = vec![0.0; m];
        let mut history = Vec::new();
        if bnorm == 0.0 {
            history.push(0.0);
            return Ok((x, history));
        }
        let mut used = 0usize;
        let mut r = b.to_vec();
        let mut kx = vec![0.0; m];
        let mut best = 1.0;
        let mut stalls = 0;
        loop {
            let rel = norm(&r) / bnorm;
            history.push(rel);
            if rel <= opts.tol {
                return Ok((x, history));
            }
            if used >= opts.max_iter || stalls >= 3 {
                return Err(Error::Stagnation {
                    iterations: used,
                    residual: rel,
                    history,
                });
            }
            if rel < 0.5 * best {
                best = rel;
                stalls = 0;
            } else if history.len() > 1 {
                stalls += 1;
            }
            let target = 0.2 * opts.tol * bnorm / norm(&r);
            let budget = opts.max_iter - used;
            let (dx, its) = self.minres_cycle(&r, target, budget, &mut history, bnorm);
            used += its;
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
            self.apply(&x, &mut kx);
            for i in 0..m {
                r[i] = b[i] - kx[i];
            }
        }
    }

    /// One MINRES run for `K dx = r` to relative preconditioned residual
    /// `target`.
    fn minres_cycle(&mut self, r0: &[f64], target: f64, budget: usize, history: &mut Vec<f64>, bnorm: f64) -> (Vec<f64>, usize) {
        let m = r0.len();
        let mut x = vec![0.0; m];
        let mut r1 = r0.to_vec();
        let mut r2 = r0.to_vec();
        let mut y = vec![0.0; m];
        self.precondition(&r1, &mut y);
        let beta1 = dot(&r1, &y).max(0.0).sqrt();
        if beta1 == 0.0 {
            return (x, 0);
        }
        let r0n = norm(r0);
        let mut v = vec![0.0; m];
        let mut w = vec![0.0; m];
        let mut w1 = vec![0.0; m];
        let mut w2 = vec![0.0; m];
        let (mut oldb, mut beta, mut dbar, mut epsln, mut phibar) = (0.0f64, beta1, 0.0f64, 0.0f64, beta1);
        let (mut cs, mut sn) = (-1.0f64, 0.0f64);
        let mut its = 0;
        while its < budget {
            its += 1;
            let s = 1.0 / beta;
            for i in 0..m {
                v[i] = s * y[i];
            }
            self.apply(&v, &mut y);
            if its >= 2 {
                let f = beta / oldb;
                for i in 0..m {
                    y[i] -= f * r1[i];
                }
            }
            let alfa = dot(&v, &y);
            let f = alfa / beta;
            for i in 0..m {
                y[i] -= f * r2[i];
            }
            std::mem::swap(&mut r1, &mut r2);
            r2.copy_from_slice(&y);
            self.precondition(&r2, &mut y);
            oldb = beta;
            beta = dot(&r2, &y).max(0.0).sqrt();
            let oldeps = epsln;
            let delta = cs * dbar + sn * alfa;
            let gbar = sn * dbar - cs * alfa;
            epsln = sn * beta;
            dbar = -cs * beta;
            let gamma = gbar.hypot(beta).max(f64::EPSILON);
            cs = gbar / gamma;
            sn = beta / gamma;
            let phi = cs * phibar;
            phibar *= sn;
            let denom = 1.0 / gamma;
            std::mem::swap(&mut w1, &mut w2);
            std::mem::swap(&mut w2, &mut w);
            for i in 0..m {
                w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) * denom;
                x[i] += phi * w[i];
            }
            let est = phibar / beta1;
            history.push(est * r0n / bnorm);
            if est <= target || beta == 0.0 {
                break;
            }
        }
        (x, its)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// One isotropic Stokes solve on a fresh system.
pub fn iso_stokes_solve(grid: &Grid, rhs: &FaceField, bc: &dyn Fn(&Vec3d) -> Vec3d, opts: &LinearOptions) -> Result<FlowField> {
    let mut sys = StokesSystem::new(grid);
    sys.solve(rhs, bc, Vec3d::zero(), opts)
}
