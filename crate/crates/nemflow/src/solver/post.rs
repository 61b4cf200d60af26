//! Drag extraction, rescaled profiles and error norms.

use super::field::FlowField;
use super::grid::{Stagger, SPHERE_RADIUS};
use crate::aniso::t_gamma_stress_unchecked;
use crate::error::{Error, Result};
use crate::forcing::{c_core, d_core};
use crate::nematic::q_field_extended;
use crate::quad::GaussRule;
use crate::{ForcingContextd, Mat3d, SphereRuled, Vec3d};

/// Distance of the control sphere from the particle, in cells.
pub const CONTROL_OFFSET_CELLS: f64 = 3.0;

/// Q and its gradient, or `Q*` with zero gradient when frozen.
fn q_data(x: &Vec3d, ctx: &ForcingContextd) -> Result<(Mat3d, [Mat3d; 3])> {
    if ctx.frozen_q {
        return Ok((ctx.q_star.mat(), [Mat3d::zero(); 3]));
    }
    let s = q_field_extended(x, &ctx.params)?;
    Ok((s.q.mat(), [s.grad.slice(0), s.grad.slice(1), s.grad.slice(2)]))
}

/// Drag `∫_{|x|=1} T_γ(v, p)ν dσ` on the particle.
///
/// The stress is sampled on the control sphere `ρ = 1 + 3h`, where the
/// interpolation stencils lie in the fluid, and carried to the particle by
/// the momentum balance `div(T_γ + C_γ) = −D_γ` over the thin shell.
pub fn extract_drag(field: &FlowField, ctx: &ForcingContextd, rule: &SphereRuled) -> Result<Vec3d> {
    let rho = SPHERE_RADIUS + CONTROL_OFFSET_CELLS * field.grid.h;
    extract_drag_at(field, ctx, rule, rho)
}

/// [`extract_drag`] with an explicit control radius `rho > 1`.
pub fn extract_drag_at(field: &FlowField, ctx: &ForcingContextd, rule: &SphereRuled, rho: f64) -> Result<Vec3d> {
    if !(rho > SPHERE_RADIUS && rho + field.grid.h < field.grid.half_width) {
        return Err(Error::InvalidInput(format!("control radius {rho} outside (1, R − h)")));
    }
    let g = ctx.gamma.all();
    let aniso = ctx.gamma.max_abs() != 0.0;
    let qs = ctx.q_star.mat();
    let zero = Vec3d::zero();
    let h = field.grid.h;
    let gauss = GaussRule::<f64>::new(3);
    rule.try_integrate(|nu| {
        let x = nu.scale(rho);
        let gv = field.gradient_at(&x)?;
        let p = field.pressure_at(&x)?;
        let t = t_gamma_stress_unchecked(&gv, p, &ctx.m);
        if !aniso {
            return Ok(t.mul_vec(nu).scale(rho * rho));
        }
        let v = field.velocity_at(&x);
        let (q, gq) = q_data(&x, ctx)?;
        let c = c_core(&q, &gq, &v, &gv, &qs, &zero, &g);
        let mut acc = (t + c).mul_vec(nu).scale(rho * rho);
        // Wall gradient by linear extrapolation; v vanishes there.
        let gv2 = field.gradient_at(&nu.scale(rho + h))?;
        let gv1 = gv + (gv - gv2).scale((rho - SPHERE_RADIUS) / h);
        let (q1, gq1) = q_data(nu, ctx)?;
        acc = acc - c_core(&q1, &gq1, &zero, &gv1, &qs, &zero, &g).mul_vec(nu);
        for (r, w) in gauss.mapped(SPHERE_RADIUS, rho) {
            let s = (r - SPHERE_RADIUS) / (rho - SPHERE_RADIUS);
            let (qr, gqr) = q_data(&nu.scale(r), ctx)?;
            let vr = v.scale(s);
            let gvr = gv1.scale(1.0 - s) + gv.scale(s);
            acc += d_core(&qr, &gqr, &vr, &gvr, &g).scale(w * r * r);
        }
        Ok(acc)
    })
}

/// Sample locations for [`rescaled_profile`].
#[derive(Clone, Debug, PartialEq)]
pub enum Sampling {
    /// Equispaced points `r·direction` for `r ∈ [r_min, r_max]`.
    Ray {
        /// Ray direction; normalized internally.
        direction: Vec3d,
        /// First radius.
        r_min: f64,
        /// Last radius.
        r_max: f64,
        /// Number of samples, at least 2.
        points: usize,
    },
    /// Explicit points.
    Points(Vec<Vec3d>),
}

impl Sampling {
    /// Sample points.
    pub fn points(&self) -> Result<Vec<Vec3d>> {
        match self {
            Sampling::Ray {
                direction,
                r_min,
                r_max,
                points,
            } => {
                let d = direction
                    .normalized()
                    .ok_or(Error::InvalidInput("zero sampling direction".into()))?;
                if *points < 2 || !(r_max > r_min) {
                    return Err(Error::InvalidInput("ray needs two points and r_max > r_min".into()));
                }
                let step = (r_max - r_min) / (*points - 1) as f64;
                Ok((0..*points).map(|k| d.scale(r_min + step * k as f64)).collect())
            }
            Sampling::Points(p) => Ok(p.clone()),
        }
    }
}

/// `(r, r(v_i − v*_i)/V)` at each sample; for `v* = V e_i` this is
/// `r(v_i/V − 1)`, and `r v_j/V` for transverse components.
pub fn rescaled_profile(field: &FlowField, component: usize, sampling: &Sampling, v_scale: f64) -> Result<Vec<(f64, f64)>> {
    if component > 2 {
        return Err(Error::InvalidInput(format!("component {component} outside 0..3")));
    }
    if v_scale == 0.0 || !v_scale.is_finite() {
        return Err(Error::InvalidInput("velocity scale must be finite and nonzero".into()));
    }
    Ok(sampling
        .points()?
        .iter()
        .map(|x| {
            let r = x.norm();
            (r, r * (field.velocity_at(x)[component] - field.v_star[component]) / v_scale)
        })
        .collect())
}

/// Relative L² error of face velocities against `exact` over active faces
/// with `|x| ≥ r_min`.
pub fn relative_l2_error(field: &FlowField, r_min: f64, exact: impl Fn(&Vec3d) -> Result<Vec3d>) -> Result<f64> {
    let g = &field.grid;
    let (mut num, mut den) = (0.0, 0.0);
    for d in 0..3 {
        for i in 0..g.len() {
            let t = g.triple(i);
            if !g.face_active(d, t) {
                continue;
            }
            let x = g.position(Stagger::Face(d), t);
            if x.norm() < r_min {
                continue;
            }
            let e = exact(&x)?[d];
            num += (field.u[d][i] - e).powi(2);
            den += e * e;
        }
    }
    if den == 0.0 {
        return Err(Error::InvalidInput("exact field vanishes on the sample set".into()));
    }
    Ok((num / den).sqrt())
}
