//! Forcing terms `A_γ`, `C_γ`, `D_γ`, the exact `div A_γ` and the full
//! right-hand side `f_γ(u)`.

use crate::aniso::{assemble_m, b_gamma_core, strain_vorticity, tsv_core, AnisotropyTensor, GammaSet};
use crate::error::{Error, Result};
use crate::nematic::{q_field, NematicParams, QSample};
use crate::quad::{QuadValue, SphereRule};
use crate::stokes_iso::UniformFlow;
use crate::tensor_core::{dual_mat, dual_vec, Dual, Mat3, QTensor, Rank3, Rank4, Real, Ring, Vec3};

/// Default central-difference step for the divergence fallback.
pub const FD_STEP: f64 = 1e-4;

/// Parameters shared by every forcing evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForcingContext<T> {
    /// Nematic parameters.
    pub params: NematicParams<T>,
    /// Viscosity ratios.
    pub gamma: GammaSet<T>,
    /// Far-field velocity.
    pub v_star: Vec3<T>,
    /// `Q* = s*(n*⊗n* − I/3)`.
    pub q_star: QTensor<T>,
    /// Replaces the Q-field by `Q*` everywhere.
    pub frozen_q: bool,
    /// `M_γ` assembled from the fields above.
    pub m: AnisotropyTensor<T>,
}

impl<T: Real> ForcingContext<T> {
    /// Builds a context with the full Q-field.
    pub fn new(params: NematicParams<T>, gamma: GammaSet<T>, v_star: Vec3<T>) -> Self {
        Self {
            params,
            gamma,
            v_star,
            q_star: params.q_star(),
            frozen_q: false,
            m: assemble_m(&gamma, params.s_star, &params.n_star),
        }
    }

    /// Same context with the frozen-Q flag set.
    pub fn frozen(mut self, frozen: bool) -> Self {
        self.frozen_q = frozen;
        self
    }

    /// Same context with another far-field velocity.
    pub fn with_v_star(mut self, v_star: Vec3<T>) -> Self {
        self.v_star = v_star;
        self
    }

    /// Same context with other viscosity ratios.
    pub fn with_gamma(self, gamma: GammaSet<T>) -> Self {
        Self::new(self.params, gamma, self.v_star).frozen(self.frozen_q)
    }

    /// Q-field sample honouring the frozen-Q flag, `|x| ≥ 1`.
    pub fn q_at(&self, x: &Vec3<T>) -> Result<QSample<T>> {
        if self.frozen_q {
            let r = x.norm();
            if r < T::c(1.0 - 1e-12) {
                return Err(Error::Domain {
                    what: "forcing inside the particle",
                    radius: r.f(),
                });
            }
            return Ok(QSample {
                q: self.q_star,
                grad: Rank3::zero(),
                hess: Rank4::zero(),
            });
        }
        q_field(x, &self.params)
    }
}

/// Velocity with its gradient `(∇v)_ij = ∂_j v_i` and optional second
/// derivatives `hess[i][k][l] = ∂_kl v_i`.
#[derive(Clone, Copy, Debug)]
pub struct VelocitySample<T> {
    /// Value.
    pub v: Vec3<T>,
    /// Gradient.
    pub grad: Mat3<T>,
    /// Second derivatives.
    pub hess: Option<Rank3<T>>,
}

impl<T: Real> From<UniformFlow<T>> for VelocitySample<T> {
    fn from(f: UniformFlow<T>) -> Self {
        Self {
            v: f.u,
            grad: f.grad,
            hess: Some(f.hess),
        }
    }
}

impl<T: Real> VelocitySample<T> {
    /// Constant field `v` with zero derivatives.
    pub fn constant(v: Vec3<T>) -> Self {
        Self {
            v,
            grad: Mat3::zero(),
            hess: Some(Rank3::zero()),
        }
    }

    /// `a u₁ + b u₂`; second derivatives survive only if both carry them.
    pub fn combine(&self, a: T, o: &Self, b: T) -> Self {
        let hess = match (self.hess, o.hess) {
            (Some(h1), Some(h2)) => Some(h1.scale(a).add(&h2.scale(b))),
            _ => None,
        };
        Self {
            v: self.v.scale(a) + o.v.scale(b),
            grad: self.grad.scale(a) + o.grad.scale(b),
            hess,
        }
    }
}

// ---------------------------------------------------------------------------
// Ring-generic cores
// ---------------------------------------------------------------------------

/// `A_γ` as a function of `P = v*·∇Q` and `Q*`.
pub fn a_core<S: Ring>(qs: &Mat3<S>, p: &Mat3<S>, g: &[S; 11]) -> Mat3<S> {
    let qs = *qs;
    let p = *p;
    (qs * p - p * qs).scale(g[0])
        + p.scale(g[1])
        + (qs * p + p * qs).scale(g[2] * S::lit(0.5))
        + qs.scale(g[8] * p.ddot(&qs))
}

fn directional<S: Ring>(v: &Vec3<S>, gq: &[Mat3<S>; 3]) -> Mat3<S> {
    gq[0].scale(v[0]) + gq[1].scale(v[1]) + gq[2].scale(v[2])
}

/// Co-rotational derivative `Q̊ = v·∇Q + QW − WQ`.
pub fn q_ring_core<S: Ring>(q: &Mat3<S>, gq: &[Mat3<S>; 3], v: &Vec3<S>, w: &Mat3<S>) -> Mat3<S> {
    directional(v, gq) + *q * *w - *w * *q
}

/// `C_γ = T_SV − A − B_γ[∇v] − A_γ`.
#[allow(clippy::too_many_arguments)]
pub fn c_core<S: Ring>(
    q: &Mat3<S>,
    gq: &[Mat3<S>; 3],
    v: &Vec3<S>,
    gv: &Mat3<S>,
    qs: &Mat3<S>,
    vs: &Vec3<S>,
    g: &[S; 11],
) -> Mat3<S> {
    let (a, w) = strain_vorticity(gv);
    let qr = q_ring_core(q, gq, v, &w);
    let mut g0 = *g;
    g0[7] = S::zero();
    tsv_core(q, &a, &qr, &g0) - b_gamma_core(gv, qs, g) - a_core(qs, &directional(vs, gq), g)
}

/// `D_γ` with `D_i = −X:∂_iQ`.
pub fn d_core<S: Ring>(q: &Mat3<S>, gq: &[Mat3<S>; 3], v: &Vec3<S>, gv: &Mat3<S>, g: &[S; 11]) -> Vec3<S> {
    let (a, w) = strain_vorticity(gv);
    let qr = q_ring_core(q, gq, v, &w);
    let q = *q;
    let x = qr.scale(g[0])
        + a.scale(g[1])
        + (a * q + q * a).scale(g[2] * S::lit(0.5))
        + q.scale(g[8] * a.ddot(&q));
    Vec3::from_fn(|i| -x.ddot(&gq[i]))
}

fn slices<T: Real>(r: &Rank3<T>) -> [Mat3<T>; 3] {
    [r.slice(0), r.slice(1), r.slice(2)]
}

// ---------------------------------------------------------------------------
// Public evaluations
// ---------------------------------------------------------------------------

/// `P = v*·∇Q` at `x`.
fn p_matrix<T: Real>(qs: &QSample<T>, v_star: &Vec3<T>) -> Mat3<T> {
    directional(v_star, &slices(&qs.grad))
}

/// Stress `A_γ` built from `v*·∇Q` and `Q*`; decays as `r⁻²`.
pub fn a_gamma<T: Real>(x: &Vec3<T>, ctx: &ForcingContext<T>) -> Result<Mat3<T>> {
    let qs = ctx.q_at(x)?;
    Ok(a_core(&ctx.q_star.mat(), &p_matrix(&qs, &ctx.v_star), &ctx.gamma.all()))
}

/// Exact `div A_γ` using `∂_j P = v*_k ∂_jk Q`.
pub fn div_a_gamma<T: Real>(x: &Vec3<T>, ctx: &ForcingContext<T>) -> Result<Vec3<T>> {
    let qs = ctx.q_at(x)?;
    let g = ctx.gamma.all();
    let q0 = ctx.q_star.mat();
    let mut out = Vec3::zero();
    for j in 0..3 {
        let dp = Mat3::from_fn(|a, b| (0..3).fold(T::zero(), |s, k| s + ctx.v_star[k] * qs.hess.0[j][k][a][b]));
        let col = a_core(&q0, &dp, &g).col(j);
        out += col;
    }
    Ok(out)
}

/// Matrix `M* = −(w/(1+w))[γ₂Q* + γ₃Q*² + γ₉|Q*|²Q*]`.
pub fn m_star<T: Real>(ctx: &ForcingContext<T>) -> Mat3<T> {
    let w = ctx.params.w;
    let q = ctx.q_star.mat();
    let g = &ctx.gamma;
    let inner = q.scale(g.get(2)) + (q * q).scale(g.get(3)) + q.scale(g.get(9) * q.norm_sq());
    inner.scale(-w / (T::one() + w))
}

/// Amplitude of the `r⁻³` part of `div A_γ`: `−M*(I − 3x̂⊗x̂)v*`.
///
/// Zero in frozen-Q mode.
pub fn div_a_leading<T: Real>(x_hat: &Vec3<T>, ctx: &ForcingContext<T>) -> Vec3<T> {
    if ctx.frozen_q {
        return Vec3::zero();
    }
    let k = Mat3::identity() - x_hat.outer(x_hat).scale(T::c(3.0));
    -m_star(ctx).mul_vec(&k.mul_vec(&ctx.v_star))
}

/// `C_γ(u)` at `x`.
pub fn c_gamma<T: Real>(u: &VelocitySample<T>, x: &Vec3<T>, ctx: &ForcingContext<T>) -> Result<Mat3<T>> {
    let qs = ctx.q_at(x)?;
    Ok(c_core(
        &qs.q.mat(),
        &slices(&qs.grad),
        &u.v,
        &u.grad,
        &ctx.q_star.mat(),
        &ctx.v_star,
        &ctx.gamma.all(),
    ))
}

/// `D_γ(u)` at `x`; decays as `r⁻⁴` on the uniform flow.
pub fn d_gamma<T: Real>(u: &VelocitySample<T>, x: &Vec3<T>, ctx: &ForcingContext<T>) -> Result<Vec3<T>> {
    let qs = ctx.q_at(x)?;
    Ok(d_core(&qs.q.mat(), &slices(&qs.grad), &u.v, &u.grad, &ctx.gamma.all()))
}

/// `div C_γ(u)` by forward-mode differentiation; needs second derivatives.
pub fn div_c_gamma<T: Real>(u: &VelocitySample<T>, x: &Vec3<T>, ctx: &ForcingContext<T>) -> Result<Vec3<T>> {
    let hess = u
        .hess
        .ok_or(Error::MissingDerivative("second derivatives of the velocity"))?;
    let qs = ctx.q_at(x)?;
    let g = ctx.gamma.all().map(Dual::cst);
    let q0 = ctx.q_star.mat().map(Dual::cst);
    let vs = ctx.v_star.map(Dual::cst);
    let gq = slices(&qs.grad);
    let mut out = Vec3::zero();
    for j in 0..3 {
        let q = dual_mat(&qs.q.mat(), &gq[j]);
        let gqd = [0, 1, 2].map(|k| dual_mat(&gq[k], &qs.hess.slice(j, k)));
        let v = dual_vec(&u.v, &u.grad.col(j));
        let gv = dual_mat(&u.grad, &Mat3::from_fn(|i, l| hess.0[i][j][l]));
        let c = c_core(&q, &gqd, &v, &gv, &q0, &vs, &g);
        out += Vec3::from_fn(|i| c.0[i][j].eps);
    }
    Ok(out)
}

/// Right-hand side `f_γ(u) = div A_γ + div C_γ(u) + D_γ(u)`.
pub fn f_gamma<T: Real>(u: &VelocitySample<T>, x: &Vec3<T>, ctx: &ForcingContext<T>) -> Result<Vec3<T>> {
    Ok(div_a_gamma(x, ctx)? + div_c_gamma(u, x, ctx)? + d_gamma(u, x, ctx)?)
}

/// [`f_gamma`] with `div C_γ` by central differences of a velocity field
/// that supplies value and gradient only.
pub fn f_gamma_fd<T: Real>(
    field: impl Fn(&Vec3<T>) -> Result<VelocitySample<T>>,
    x: &Vec3<T>,
    ctx: &ForcingContext<T>,
    h: T,
) -> Result<Vec3<T>> {
    let mut div_c = Vec3::zero();
    for j in 0..3 {
        let e = Vec3::unit(j).scale(h);
        let xp = *x + e;
        let xm = *x - e;
        let cp = c_gamma(&field(&xp)?, &xp, ctx)?;
        let cm = c_gamma(&field(&xm)?, &xm, ctx)?;
        div_c += (cp - cm).col(j).scale(T::one() / (h + h));
    }
    let u = field(x)?;
    Ok(div_a_gamma(x, ctx)? + div_c + d_gamma(&u, x, ctx)?)
}

/// `∫_{𝕊²} field dσ` by the given rule.
pub fn sphere_mean<T: Real, V: QuadValue<T>>(field: impl FnMut(&Vec3<T>) -> V, rule: &SphereRule<T>) -> V {
    rule.integrate(field)
}
