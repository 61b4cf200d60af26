//! Velocity Laplacian with immersed-boundary rows and its geometric
//! multigrid V-cycle.

use super::grid::{sphere_hit, Grid, Stagger};
use crate::Vec3d;

/// Smallest accepted interface fraction in the ghost-value rows.
pub const THETA_MIN: f64 = 1e-3;
/// Damped-Jacobi weight.
const OMEGA: f64 = 0.8;
/// Smoothing sweeps before and after the coarse correction.
const SWEEPS: usize = 2;
/// Coarsening stops below this many cells per axis.
const COARSEST: usize = 8;

/// A Dirichlet neighbour of an active node.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Dirichlet {
    /// Flat index of the active node.
    pub node: usize,
    /// Coefficient `1/(θh²)` multiplying the boundary value.
    pub coef: f64,
    /// Boundary point.
    pub point: Vec3d,
    /// True on the particle surface, where the value is zero.
    pub on_sphere: bool,
}

/// `−Δ` for one velocity component on one level.
///
/// Active rows use the symmetric ghost-value treatment of Dirichlet
/// neighbours: each contributes `1/(θh²)` to the diagonal. Inactive rows
/// are the identity scaled by `6/h²`.
pub(crate) struct Level {
    pub grid: Grid,
    pub diag: Vec<f64>,
    pub nb: Vec<u8>,
    pub active: Vec<bool>,
    offsets: [usize; 3],
    inv_h2: f64,
}

impl Level {
    /// Builds the operator; also returns the Dirichlet neighbours.
    pub fn build(grid: Grid, d: usize) -> (Self, Vec<Dirichlet>) {
        let len = grid.len();
        let p = grid.padded();
        let h = grid.h;
        let inv_h2 = 1.0 / (h * h);
        let mut diag = vec![6.0 * inv_h2; len];
        let mut nb = vec![0u8; len];
        let mut active = vec![false; len];
        let mut dirichlet = Vec::new();
        let n = grid.n;
        for i0 in 0..p {
            for i1 in 0..p {
                for i2 in 0..p {
                    let t = [i0, i1, i2];
                    if !grid.face_active(d, t) {
                        continue;
                    }
                    let idx = grid.index(t);
                    active[idx] = true;
                    let x = grid.position(Stagger::Face(d), t);
                    let mut dg = 0.0;
                    let mut bits = 0u8;
                    for a in 0..3 {
                        for (s, sign) in [(0usize, -1.0f64), (1, 1.0)] {
                            let mut u = t;
                            u[a] = if s == 0 { t[a] - 1 } else { t[a] + 1 };
                            let bit = 1u8 << (2 * a + s);
                            if a == d && (u[a] == 0 || u[a] == n) {
                                dg += 1.0;
                                dirichlet.push(Dirichlet {
                                    node: idx,
                                    coef: inv_h2,
                                    point: grid.position(Stagger::Face(d), u),
                                    on_sphere: false,
                                });
                            } else if a != d && (u[a] == 0 || u[a] == n + 1) {
                                dg += 2.0;
                                dirichlet.push(Dirichlet {
                                    node: idx,
                                    coef: 2.0 * inv_h2,
                                    point: x + Vec3d::unit(a).scale(sign * 0.5 * h),
                                    on_sphere: false,
                                });
                            } else if let Some(dist) = sphere_hit(&x, a, sign, h) {
                                let theta = (dist / h).max(THETA_MIN);
                                dg += 1.0 / theta;
                                dirichlet.push(Dirichlet {
                                    node: idx,
                                    coef: inv_h2 / theta,
                                    point: x + Vec3d::unit(a).scale(sign * dist),
                                    on_sphere: true,
                                });
                            } else {
                                dg += 1.0;
                                bits |= bit;
                            }
                        }
                    }
                    diag[idx] = dg * inv_h2;
                    nb[idx] = bits;
                }
            }
        }
        let offsets = grid.strides();
        (
            Self {
                grid,
                diag,
                nb,
                active,
                offsets,
                inv_h2,
            },
            dirichlet,
        )
    }

    /// `(A x)` at one node.
    #[inline]
    fn row(&self, x: &[f64], i: usize) -> f64 {
        let bits = self.nb[i];
        let [s0, s1, s2] = self.offsets;
        let sum = if bits == 0x3f {
            x[i - s0] + x[i + s0] + x[i - s1] + x[i + s1] + x[i - s2] + x[i + s2]
        } else {
            let mut acc = 0.0;
            let off = [s0, s0, s1, s1, s2, s2];
            for (b, &o) in off.iter().enumerate() {
                if bits & (1 << b) != 0 {
                    acc += if b % 2 == 0 { x[i - o] } else { x[i + o] };
                }
            }
            acc
        };
        self.diag[i] * x[i] - self.inv_h2 * sum
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..x.len() {
            y[i] = if self.active[i] { self.row(x, i) } else { self.diag[i] * x[i] };
        }
    }

    /// `r = b − A x`.
    fn residual(&self, b: &[f64], x: &[f64], r: &mut [f64]) {
        for i in 0..x.len() {
            r[i] = if self.active[i] { b[i] - self.row(x, i) } else { 0.0 };
        }
    }

    /// Damped Jacobi sweeps starting from `x`.
    fn smooth(&self, b: &[f64], x: &mut Vec<f64>, tmp: &mut Vec<f64>, sweeps: usize) {
        for _ in 0..sweeps {
            for i in 0..x.len() {
                tmp[i] = if self.active[i] {
                    x[i] + OMEGA * (b[i] - self.row(x, i)) / self.diag[i]
                } else {
                    0.0
                };
            }
            std::mem::swap(x, tmp);
        }
    }
}

/// One-dimensional prolongation weights: fine entry → (coarse entry, weight).
fn weights(vertex: bool, nc: usize) -> Vec<Vec<(usize, f64)>> {
    let nf = 2 * nc;
    let mut w = vec![Vec::new(); nf + 2];
    if vertex {
        for (j, wj) in w.iter_mut().enumerate().take(nf + 1) {
            if j % 2 == 0 {
                wj.push((j / 2, 1.0));
            } else {
                wj.push(((j - 1) / 2, 0.5));
                wj.push(((j + 1) / 2, 0.5));
            }
        }
    } else {
        for c in 0..nf {
            let cc = c / 2;
            let (near, far) = if c % 2 == 0 { (cc as isize, cc as isize - 1) } else { (cc as isize, cc as isize + 1) };
            let wj = &mut w[c + 1];
            if far < 0 || far >= nc as isize {
                wj.push((near as usize + 1, 0.5));
            } else {
                wj.push((near as usize + 1, 0.75));
                wj.push((far as usize + 1, 0.25));
            }
        }
    }
    w
}

/// Applies the 1-D prolongation along `axis` (`transpose` gives `½Pᵀ`).
fn pass(src: &[f64], sdims: [usize; 3], axis: usize, w: &[Vec<(usize, f64)>], dst: &mut [f64], ddims: [usize; 3], transpose: bool) {
    dst.iter_mut().for_each(|v| *v = 0.0);
    let sst = [sdims[1] * sdims[2], sdims[2], 1];
    let dst_st = [ddims[1] * ddims[2], ddims[2], 1];
    let others: Vec<usize> = (0..3).filter(|&a| a != axis).collect();
    let (oa, ob) = (others[0], others[1]);
    for ia in 0..ddims[oa] {
        for ib in 0..ddims[ob] {
            let sbase = ia * sst[oa] + ib * sst[ob];
            let dbase = ia * dst_st[oa] + ib * dst_st[ob];
            for (fine, list) in w.iter().enumerate() {
                for &(coarse, wt) in list {
                    if transpose {
                        dst[dbase + coarse * dst_st[axis]] += 0.5 * wt * src[sbase + fine * sst[axis]];
                    } else {
                        dst[dbase + fine * dst_st[axis]] += wt * src[sbase + coarse * sst[axis]];
                    }
                }
            }
        }
    }
}

/// Dense Cholesky factor of the coarsest operator on its active nodes.
struct Coarse {
    map: Vec<usize>,
    l: Vec<f64>,
}

impl Coarse {
    fn new(level: &Level) -> Self {
        let map: Vec<usize> = (0..level.grid.len()).filter(|&i| level.active[i]).collect();
        let m = map.len();
        let mut a = vec![0.0; m * m];
        let mut e = vec![0.0; level.grid.len()];
        let mut col = vec![0.0; level.grid.len()];
        for (j, &gj) in map.iter().enumerate() {
            e[gj] = 1.0;
            level.apply(&e, &mut col);
            e[gj] = 0.0;
            for (i, &gi) in map.iter().enumerate() {
                a[i * m + j] = col[gi];
            }
        }
        for j in 0..m {
            let mut s = a[j * m + j];
            for k in 0..j {
                s -= a[j * m + k] * a[j * m + k];
            }
            let d = s.max(f64::MIN_POSITIVE).sqrt();
            a[j * m + j] = d;
            for i in j + 1..m {
                let mut s = a[i * m + j];
                for k in 0..j {
                    s -= a[i * m + k] * a[j * m + k];
                }
                a[i * m + j] = s / d;
            }
        }
        Self { map, l: a }
    }

    fn solve(&self, b: &[f64], x: &mut [f64]) {
        let m = self.map.len();
        let mut y: Vec<f64> = self.map.iter().map(|&g| b[g]).collect();
        for i in 0..m {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[i * m + k] * y[k];
            }
            y[i] = s / self.l[i * m + i];
        }
        for i in (0..m).rev() {
            let mut s = y[i];
            for k in i + 1..m {
                s -= self.l[k * m + i] * y[k];
            }
            y[i] = s / self.l[i * m + i];
        }
        x.iter_mut().for_each(|v| *v = 0.0);
        for (i, &g) in self.map.iter().enumerate() {
            x[g] = y[i];
        }
    }
}

struct Buffers {
    x: Vec<f64>,
    b: Vec<f64>,
    r: Vec<f64>,
    t: Vec<f64>,
}

/// Symmetric V-cycle for one velocity component; usable as a fixed SPD
/// preconditioner.
pub(crate) struct VCycle {
    d: usize,
    levels: Vec<Level>,
    bufs: Vec<Buffers>,
    coarse: Coarse,
    scratch: [Vec<f64>; 2],
}

impl VCycle {
    /// Builds the hierarchy below `grid` for component `d`.
    pub fn new(grid: &Grid, d: usize) -> (Self, Vec<Dirichlet>) {
        let (fine, dirichlet) = Level::build(grid.clone(), d);
        let mut levels = vec![fine];
        let mut g = grid.clone();
        while g.n % 2 == 0 && g.n > COARSEST {
            g = Grid::raw(g.half_width, g.n / 2);
            levels.push(Level::build(g.clone(), d).0);
        }
        let bufs = levels
            .iter()
            .map(|l| {
                let len = l.grid.len();
                Buffers {
                    x: vec![0.0; len],
                    b: vec![0.0; len],
                    r: vec![0.0; len],
                    t: vec![0.0; len],
                }
            })
            .collect();
        let coarse = Coarse::new(levels.last().expect("at least one level"));
        let big = grid.len();
        (
            Self {
                d,
                levels,
                bufs,
                coarse,
                scratch: [vec![0.0; big], vec![0.0; big]],
            },
            dirichlet,
        )
    }

    /// Fine-level operator.
    pub fn fine(&self) -> &Level {
        &self.levels[0]
    }

    /// `z ≈ A⁻¹ r`.
    pub fn apply(&mut self, r: &[f64], z: &mut [f64]) {
        self.bufs[0].b.copy_from_slice(r);
        self.cycle(0);
        z.copy_from_slice(&self.bufs[0].x);
    }

    fn cycle(&mut self, l: usize) {
        let last = self.levels.len() - 1;
        if l == last {
            let (b, x) = {
                let buf = &mut self.bufs[l];
                (std::mem::take(&mut buf.b), &mut buf.x)
            };
            self.coarse.solve(&b, x);
            self.bufs[l].b = b;
            return;
        }
        {
            let buf = &mut self.bufs[l];
            buf.x.iter_mut().for_each(|v| *v = 0.0);
            let level = &self.levels[l];
            level.smooth(&buf.b, &mut buf.x, &mut buf.t, SWEEPS);
            level.residual(&buf.b, &buf.x, &mut buf.r);
        }
        self.restrict(l);
        self.cycle(l + 1);
        self.prolong_add(l);
        let buf = &mut self.bufs[l];
        self.levels[l].smooth(&buf.b, &mut buf.x, &mut buf.t, SWEEPS);
    }

    fn dims(&self, l: usize) -> usize {
        self.levels[l].grid.padded()
    }

    fn axis_weights(&self, l: usize, axis: usize) -> Vec<Vec<(usize, f64)>> {
        weights(axis == self.d, self.levels[l + 1].grid.n)
    }

    fn restrict(&mut self, l: usize) {
        let pf = self.dims(l);
        let pc = self.dims(l + 1);
        let w: Vec<_> = (0..3).map(|a| self.axis_weights(l, a)).collect();
        let [s0, s1] = &mut self.scratch;
        let d0 = [pf, pf, pf];
        let d1 = [pf, pf, pc];
        let d2 = [pf, pc, pc];
        let d3 = [pc, pc, pc];
        pass(&self.bufs[l].r, d0, 2, &w[2], &mut s0[..pf * pf * pc], d1, true);
        pass(&s0[..pf * pf * pc], d1, 1, &w[1], &mut s1[..pf * pc * pc], d2, true);
        let coarse = &mut self.bufs[l + 1].b;
        pass(&s1[..pf * pc * pc], d2, 0, &w[0], coarse, d3, true);
        let lv = &self.levels[l + 1];
        for (v, &a) in coarse.iter_mut().zip(&lv.active) {
            if !a {
                *v = 0.0;
            }
        }
    }

    fn prolong_add(&mut self, l: usize) {
        let pf = self.dims(l);
        let pc = self.dims(l + 1);
        let w: Vec<_> = (0..3).map(|a| self.axis_weights(l, a)).collect();
        let [s0, s1] = &mut self.scratch;
        let d3 = [pc, pc, pc];
        let d2 = [pf, pc, pc];
        let d1 = [pf, pf, pc];
        let d0 = [pf, pf, pf];
        pass(&self.bufs[l + 1].x, d3, 0, &w[0], &mut s1[..pf * pc * pc], d2, false);
        pass(&s1[..pf * pc * pc], d2, 1, &w[1], &mut s0[..pf * pf * pc], d1, false);
        let buf = &mut self.bufs[l];
        pass(&s0[..pf * pf * pc], d1, 2, &w[2], &mut buf.r, d0, false);
        let lv = &self.levels[l];
        for ((x, e), &a) in buf.x.iter_mut().zip(&buf.r).zip(&lv.active) {
            if a {
                *x += e;
            }
        }
    }
}
