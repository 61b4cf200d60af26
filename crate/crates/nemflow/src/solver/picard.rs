//! Anisotropic right-hand side on the grid, Picard iteration and the
//! first-order deviation field.

use super::field::{FaceField, FlowField};
use super::grid::{Grid, Stagger, SPHERE_RADIUS};
use super::stokes::{LinearOptions, StokesSystem};
use crate::error::{Error, Result};
use crate::forcing::{c_core, d_core, f_gamma, VelocitySample};
use crate::nematic::q_field_extended;
use crate::stokes_iso::{annulus_velocity, uniform_flow};
use crate::tensor_core::contract_m_d2;
use crate::{ForcingContextd, Mat3d, Vec3d};

/// Loosest relative tolerance of an increment solve.
const INCREMENT_TOL_CAP: f64 = 1e-6;

/// Outer boundary data on the box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OuterBc {
    /// `v = v*`.
    FarVStar,
    /// `v = E_S v*`, the exact isotropic exterior flow.
    AnalyticEs,
    /// Exact flow in the annulus `1 < |x| < outer_radius`.
    Annulus {
        /// Outer radius; must contain the box.
        outer_radius: f64,
    },
}

impl OuterBc {
    /// Boundary velocity at `x`.
    pub fn value(&self, x: &Vec3d, v_star: &Vec3d) -> Result<Vec3d> {
        match *self {
            OuterBc::FarVStar => Ok(*v_star),
            OuterBc::AnalyticEs => Ok(uniform_flow(x, SPHERE_RADIUS, v_star)?.u),
            OuterBc::Annulus { outer_radius } => annulus_velocity(x, SPHERE_RADIUS, outer_radius, v_star),
        }
    }

    /// Checks the data against the grid.
    pub fn validate(&self, grid: &Grid) -> Result<()> {
        if let OuterBc::Annulus { outer_radius } = *self {
            let corner = 3f64.sqrt() * (grid.half_width + grid.h);
            if outer_radius < corner {
                return Err(Error::InvalidInput(format!(
                    "annulus radius {outer_radius} does not contain the box (needs {corner:.3})"
                )));
            }
        }
        Ok(())
    }

    /// Boundary closure for a scenario; errors were excluded by `validate`.
    pub fn closure(self, v_star: Vec3d) -> impl Fn(&Vec3d) -> Vec3d {
        move |x| self.value(x, &v_star).unwrap_or(v_star)
    }
}

/// Picard settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PicardOptions {
    /// Relative update `‖δ‖∞/‖v‖∞` that stops the iteration.
    pub tol: f64,
    /// Iteration budget.
    pub max_iter: usize,
    /// Under-relaxation weight in `(0, 1]`.
    pub relaxation: f64,
    /// Inner linear solves.
    pub linear: LinearOptions,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 100,
            relaxation: 1.0,
            linear: LinearOptions::default(),
        }
    }
}

/// Q-field data at one cell centre.
#[derive(Clone, Copy)]
struct QCell {
    q: Mat3d,
    gq: [Mat3d; 3],
}

/// Discrete `M_γ:D²v + f_γ(v)`, written as `div S(v) + D_γ(v)` with the
/// cell stress `S = B_γ(∇v) + C_γ(v) + A_γ`. The `A_γ` parts of `div A_γ`
/// and `div C_γ` cancel, so `S` and `D_γ` are linear in `v`.
pub struct AnisotropicRhs {
    grid: Grid,
    ctx: ForcingContextd,
    bmat: [[f64; 9]; 9],
    q: Vec<Option<QCell>>,
    zero: bool,
}

impl AnisotropicRhs {
    /// Tabulates `Q` near and outside the particle.
    pub fn new(grid: &Grid, ctx: &ForcingContextd) -> Result<Self> {
        let m = &ctx.m.m;
        let mut bmat = [[0.0; 9]; 9];
        for i in 0..3 {
            for j in 0..3 {
                for mm in 0..3 {
                    for k in 0..3 {
                        bmat[i * 3 + j][mm * 3 + k] = m.get(i, mm, k, j);
                    }
                }
            }
        }
        let zero = ctx.gamma.max_abs() == 0.0;
        let band = SPHERE_RADIUS - 2.5 * grid.h;
        let mut q = vec![None; grid.len()];
        if !zero {
            for (c, slot) in q.iter_mut().enumerate() {
                let t = grid.triple(c);
                if !grid.cell_inside(t) {
                    continue;
                }
                let x = grid.position(Stagger::Cell, t);
                if x.norm() < band {
                    continue;
                }
                *slot = Some(if ctx.frozen_q {
                    QCell {
                        q: ctx.q_star.mat(),
                        gq: [Mat3d::zero(); 3],
                    }
                } else {
                    let s = q_field_extended(&x, &ctx.params)?;
                    QCell {
                        q: s.q.mat(),
                        gq: [s.grad.slice(0), s.grad.slice(1), s.grad.slice(2)],
                    }
                });
            }
        }
        Ok(Self {
            grid: grid.clone(),
            ctx: *ctx,
            bmat,
            q,
            zero,
        })
    }

    fn stress(&self, gv: &Mat3d, v: &Vec3d, qc: &QCell) -> (Mat3d, Vec3d) {
        let g = self.ctx.gamma.all();
        let flat: [f64; 9] = std::array::from_fn(|r| gv.0[r / 3][r % 3]);
        let b = Mat3d::from_fn(|i, j| self.bmat[i * 3 + j].iter().zip(&flat).map(|(a, b)| a * b).sum());
        let c = c_core(&qc.q, &qc.gq, v, gv, &self.ctx.q_star.mat(), &Vec3d::zero(), &g);
        let d = d_core(&qc.q, &qc.gq, v, gv, &g);
        (b + c, d)
    }

    /// Evaluates the right-hand side on the unknown faces of `field`.
    pub fn eval(&self, field: &FlowField) -> FaceField {
        let g = &self.grid;
        let mut out = FaceField::zeros(g);
        if self.zero {
            return out;
        }
        let len = g.len();
        let n = g.n;
        let st = g.strides();
        let mut s = vec![Mat3d::zero(); len];
        let mut dv = vec![Vec3d::zero(); len];
        for c in 0..len {
            if let Some(qc) = &self.q[c] {
                let (sc, dc) = self.stress(&field.cell_gradient(c), &field.cell_velocity(c), qc);
                s[c] = sc;
                dv[c] = dc;
            }
        }
        // Linear extrapolation into the ghost layer.
        for c in 0..len {
            let t = g.triple(c);
            for a in 0..3 {
                let others_inside = (0..3).filter(|&b| b != a).all(|b| t[b] >= 1 && t[b] <= n);
                if !others_inside {
                    continue;
                }
                if t[a] == 0 {
                    s[c] = s[c + st[a]].scale(2.0) - s[c + 2 * st[a]];
                } else if t[a] == n + 1 {
                    s[c] = s[c - st[a]].scale(2.0) - s[c - 2 * st[a]];
                }
            }
        }
        let ih = 1.0 / g.h;
        for d in 0..3 {
            for i in 0..len {
                let t = g.triple(i);
                if !g.face_active(d, t) {
                    continue;
                }
                let (lo, hi) = (i, i + st[d]);
                let mut acc = (s[hi].0[d][d] - s[lo].0[d][d]) * ih;
                for a in (0..3).filter(|&a| a != d) {
                    let cd = |c: usize| s[c + st[a]].0[d][a] - s[c - st[a]].0[d][a];
                    acc += 0.25 * (cd(lo) + cd(hi)) * ih;
                }
                acc += 0.5 * (dv[lo][d] + dv[hi][d]);
                out.0[d][i] = acc;
            }
        }
        out
    }
}

fn add_scaled(v: &mut FlowField, a: f64, o: &FlowField) {
    for d in 0..3 {
        for (x, y) in v.u[d].iter_mut().zip(&o.u[d]) {
            *x += a * y;
        }
    }
    for (x, y) in v.p.iter_mut().zip(&o.p) {
        *x += a * y;
    }
}

fn scaled(o: &FlowField, a: f64) -> FlowField {
    let mut z = o.clone();
    for d in 0..3 {
        z.u[d].iter_mut().for_each(|x| *x *= a);
    }
    z.p.iter_mut().for_each(|x| *x *= a);
    z
}

/// Fixed-point iteration `v ← S⁻¹(bc, M_γ:D²v + f_γ(v))` in increment form.
pub fn picard_solve(grid: &Grid, ctx: &ForcingContextd, bc: OuterBc, opts: &PicardOptions) -> Result<FlowField> {
    let mut sys = StokesSystem::new(grid);
    picard_solve_with(&mut sys, ctx, bc, opts)
}

/// [`picard_solve`] reusing an assembled system.
pub fn picard_solve_with(sys: &mut StokesSystem, ctx: &ForcingContextd, bc: OuterBc, opts: &PicardOptions) -> Result<FlowField> {
    if !(opts.relaxation > 0.0 && opts.relaxation <= 1.0) {
        return Err(Error::InvalidInput(format!("relaxation {} outside (0, 1]", opts.relaxation)));
    }
    let grid = sys.grid().clone();
    bc.validate(&grid)?;
    let rhs = AnisotropicRhs::new(&grid, ctx)?;
    let bcf = bc.closure(ctx.v_star);
    let zero_bc = |_: &Vec3d| Vec3d::zero();
    let mut v = sys.solve(&FaceField::zeros(&grid), &bcf, ctx.v_star, &opts.linear)?;
    let mut delta = v.clone();
    let mut history = vec![1.0];
    let mut iterations = 1;
    let mut ratios = Vec::new();
    let mut last = delta.max_velocity();
    loop {
        let r = rhs.eval(&delta);
        if r.is_zero() {
            break;
        }
        if iterations >= opts.max_iter {
            return Err(Error::IterationBudget {
                iterations,
                update: history.last().copied().unwrap_or(1.0),
                history,
            });
        }
        // Increments only need accuracy relative to the full field.
        let scale = v.max_velocity() / last.max(f64::MIN_POSITIVE);
        let lin = LinearOptions {
            tol: (opts.linear.tol * scale).clamp(opts.linear.tol, INCREMENT_TOL_CAP),
            ..opts.linear
        };
        let inc = sys.solve(&r, &zero_bc, Vec3d::zero(), &lin)?;
        let w = opts.relaxation;
        let mut next = scaled(&inc, w);
        if w < 1.0 {
            add_scaled(&mut next, 1.0 - w, &delta);
        }
        add_scaled(&mut v, 1.0, &next);
        delta = next;
        iterations += 1;
        let size = delta.max_velocity();
        let ratio = size / last.max(f64::MIN_POSITIVE);
        last = size;
        ratios.push(ratio);
        let rel = size / v.max_velocity().max(f64::MIN_POSITIVE);
        history.push(rel);
        if ratios.len() >= 3 && ratios[ratios.len() - 3..].iter().all(|&q| q >= 1.0) {
            return Err(Error::NotContracting { ratios });
        }
        if rel <= opts.tol || size == 0.0 {
            break;
        }
    }
    v.picard_history = history;
    v.picard_iterations = iterations;
    v.gamma = Some(ctx.gamma);
    v.v_star = ctx.v_star;
    Ok(v)
}

/// Velocity about which the deviation is linearized.
pub enum PerturbationBase<'a> {
    /// Analytic `v₀ = E_S v*` evaluated pointwise.
    Analytic,
    /// A grid solution at `γ = 0` passed through the discrete operator.
    Grid(&'a FlowField),
}

/// First-order deviation `φ̄_γ`: one isotropic solve with right-hand side
/// `M_γ:D²v₀ + f_γ(v₀)` and outer data `outer`.
pub fn perturbation_field(
    grid: &Grid,
    ctx: &ForcingContextd,
    base: PerturbationBase<'_>,
    outer: &dyn Fn(&Vec3d) -> Vec3d,
    opts: &LinearOptions,
) -> Result<FlowField> {
    let rhs = match base {
        PerturbationBase::Analytic => analytic_rhs(grid, ctx)?,
        PerturbationBase::Grid(v0) => {
            if &v0.grid != grid {
                return Err(Error::InvalidInput("base field lives on another grid".into()));
            }
            AnisotropicRhs::new(grid, ctx)?.eval(v0)
        }
    };
    let mut sys = StokesSystem::new(grid);
    let mut f = sys.solve(&rhs, outer, Vec3d::zero(), opts)?;
    f.gamma = Some(ctx.gamma);
    Ok(f)
}

/// `M_γ:D²v₀ + f_γ(v₀)` on unknown faces for `v₀ = E_S v*`.
pub fn analytic_rhs(grid: &Grid, ctx: &ForcingContextd) -> Result<FaceField> {
    if ctx.gamma.max_abs() == 0.0 {
        return Ok(FaceField::zeros(grid));
    }
    FaceField::from_vector_fn(grid, |x| {
        let fl = uniform_flow(x, SPHERE_RADIUS, &ctx.v_star)?;
        let md2 = contract_m_d2(&ctx.m.m, &fl.hess);
        let u: VelocitySample<f64> = fl.into();
        Ok(md2 + f_gamma(&u, x, ctx)?)
    })
}
