//! Isotropic Stokes building blocks: the Oseen tensor, the dipole tensor
//! `F`, uniform flow past a sphere, Stokes drag and the annulus solution.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::SphereRule;
use crate::tensor_core::{delta, Mat3, Rank3, Rank4, Real, Vec3};

/// Velocity and pressure Green's functions at a point.
#[derive(Clone, Copy, Debug)]
pub struct StokesPair<T> {
    /// Velocity Green's function `E`.
    pub e: Mat3<T>,
    /// Pressure Green's function `q`.
    pub q: Vec3<T>,
}

/// Oseen tensor with first and second derivatives.
#[derive(Clone, Copy, Debug)]
pub struct OseenSample<T> {
    /// `E` and `q`.
    pub pair: StokesPair<T>,
    /// `de[k][i][j] = ∂_k E_ij`.
    pub de: Rank3<T>,
    /// `d2e[k][l][i][j] = ∂_kl E_ij`.
    pub d2e: Rank4<T>,
}

/// Matrix field value with first and second derivatives.
#[derive(Clone, Copy, Debug)]
pub struct MatField<T> {
    /// Value.
    pub m: Mat3<T>,
    /// `d[k][i][j] = ∂_k M_ij`.
    pub d: Rank3<T>,
    /// `d2[k][l][i][j] = ∂_kl M_ij`.
    pub d2: Rank4<T>,
}

fn split_radius<T: Real>(x: &Vec3<T>) -> Result<(T, Vec3<T>)> {
    let r = x.norm();
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::Singular("evaluation at the origin"));
    }
    Ok((r, x.scale(T::one() / r)))
}

/// Oseen tensor `E = (1/8π)[I/r + x⊗x/r³]`, pressure `q = −x/(4π r³)` and
/// the first two derivatives of `E`.
pub fn oseen_tensor<T: Real>(x: &Vec3<T>) -> Result<OseenSample<T>> {
    let (r, u) = split_radius(x)?;
    let c = T::c(1.0 / (8.0 * PI));
    let three = T::c(3.0);
    let e = Mat3::from_fn(|i, j| c * (delta::<T>(i, j) + u[i] * u[j]) / r);
    let q = u.scale(-T::c(1.0 / (4.0 * PI)) / (r * r));
    let r2 = r * r;
    let de = Rank3::from_fn(|k, i, j| {
        c / r2
            * (-delta::<T>(i, j) * u[k] + delta::<T>(k, i) * u[j] + delta::<T>(k, j) * u[i]
                - three * u[i] * u[j] * u[k])
    });
    let r3 = r2 * r;
    let d2e = Rank4::from_fn(|k, l, i, j| {
        let d = delta::<T>;
        let t = -d(i, j) * d(k, l) + three * d(i, j) * u[k] * u[l]
            + d(k, i) * d(l, j)
            + d(k, j) * d(l, i)
            - three
                * (d(k, i) * u[j] * u[l]
                    + d(k, j) * u[i] * u[l]
                    + d(l, i) * u[j] * u[k]
                    + d(l, j) * u[i] * u[k]
                    + d(k, l) * u[i] * u[j])
            + T::c(15.0) * u[i] * u[j] * u[k] * u[l];
        c / r3 * t
    });
    Ok(OseenSample {
        pair: StokesPair { e, q },
        de,
        d2e,
    })
}

/// Dipole tensor `F = (3x⊗x − r²I)/r⁵ = ∇∇(1/r)` with two derivatives.
pub fn f_tensor<T: Real>(x: &Vec3<T>) -> Result<MatField<T>> {
    let (r, u) = split_radius(x)?;
    let d = delta::<T>;
    let three = T::c(3.0);
    let r3 = r * r * r;
    let m = Mat3::from_fn(|i, j| (three * u[i] * u[j] - d(i, j)) / r3);
    let r4 = r3 * r;
    let dm = Rank3::from_fn(|k, i, j| {
        (three * (d(i, j) * u[k] + d(i, k) * u[j] + d(j, k) * u[i])
            - T::c(15.0) * u[i] * u[j] * u[k])
            / r4
    });
    let r5 = r4 * r;
    let d2m = Rank4::from_fn(|k, l, i, j| {
        let pairs = d(i, j) * u[k] * u[l]
            + d(i, k) * u[j] * u[l]
            + d(i, l) * u[j] * u[k]
            + d(j, k) * u[i] * u[l]
            + d(j, l) * u[i] * u[k]
            + d(k, l) * u[i] * u[j];
        (three * (d(i, j) * d(k, l) + d(i, k) * d(j, l) + d(i, l) * d(j, k))
            - T::c(15.0) * pairs
            + T::c(105.0) * u[i] * u[j] * u[k] * u[l])
            / r5
    });
    Ok(MatField { m, d: dm, d2: d2m })
}

/// `1/r` with its gradient and Hessian (the Hessian is `F`).
pub fn inv_r<T: Real>(x: &Vec3<T>) -> Result<(T, Vec3<T>, Mat3<T>)> {
    let (r, u) = split_radius(x)?;
    let g = u.scale(-T::one() / (r * r));
    let h = Mat3::from_fn(|i, j| (T::c(3.0) * u[i] * u[j] - delta::<T>(i, j)) / (r * r * r));
    Ok((T::one() / r, g, h))
}

/// Resistance tensor `E_S = I − 6πa E + (a³/4) F` with two derivatives.
///
/// Valid for any `x ≠ 0`; the physical flow uses `|x| ≥ a`.
pub fn es_tensor<T: Real>(x: &Vec3<T>, a: T) -> Result<MatField<T>> {
    let os = oseen_tensor(x)?;
    let f = f_tensor(x)?;
    let ce = -T::c(6.0 * PI) * a;
    let cf = a * a * a * T::c(0.25);
    Ok(MatField {
        m: Mat3::identity() + os.pair.e.scale(ce) + f.m.scale(cf),
        d: os.de.scale(ce).add(&f.d.scale(cf)),
        d2: os.d2e.scale(ce).add(&f.d2.scale(cf)),
    })
}

/// Uniform flow past a sphere with derivatives.
#[derive(Clone, Copy, Debug)]
pub struct UniformFlow<T> {
    /// Velocity `U = E_S v*`.
    pub u: Vec3<T>,
    /// Pressure.
    pub p: T,
    /// `(∇U)_ij = ∂_j U_i`.
    pub grad: Mat3<T>,
    /// `hess[i][k][l] = ∂_kl U_i`.
    pub hess: Rank3<T>,
}

/// Applies a matrix field with derivatives to a constant vector.
pub fn apply_field<T: Real>(f: &MatField<T>, v: &Vec3<T>) -> (Vec3<T>, Mat3<T>, Rank3<T>) {
    let u = f.m.mul_vec(v);
    let grad = Mat3::from_fn(|i, j| f.d.slice(j).mul_vec(v)[i]);
    let hess = Rank3::from_fn(|i, k, l| f.d2.slice(k, l).mul_vec(v)[i]);
    (u, grad, hess)
}

/// Unbounded-domain flow `U = E_S v*` past a sphere of radius `a` with its
/// pressure, gradient and second derivatives, without a domain check.
pub fn uniform_flow_unchecked<T: Real>(x: &Vec3<T>, a: T, v_star: &Vec3<T>) -> Result<UniformFlow<T>> {
    let es = es_tensor(x, a)?;
    let (u, grad, hess) = apply_field(&es, v_star);
    let q = oseen_tensor(x)?.pair.q;
    let p = T::c(6.0 * PI) * a * q.dot(v_star);
    Ok(UniformFlow { u, p, grad, hess })
}

/// Uniform flow past a sphere, `|x| ≥ a`.
pub fn uniform_flow<T: Real>(x: &Vec3<T>, a: T, v_star: &Vec3<T>) -> Result<UniformFlow<T>> {
    let r = x.norm();
    if r < a * T::c(1.0 - 1e-12) {
        return Err(Error::Domain {
            what: "uniform flow inside the particle",
            radius: r.f(),
        });
    }
    uniform_flow_unchecked(x, a, v_star)
}

/// Stokes law `6πa v*`.
pub fn stokes_drag<T: Real>(a: T, v_star: &Vec3<T>) -> Vec3<T> {
    v_star.scale(T::c(6.0 * PI) * a)
}

/// Isotropic stress `∇u + ∇uᵀ − pI`.
pub fn newtonian_stress<T: Real>(grad: &Mat3<T>, p: T) -> Mat3<T> {
    *grad + grad.transpose() - Mat3::identity().scale(p)
}

/// Surface integral of the analytic stress of `E_S v*` over `|x| = a` with
/// the normal pointing into the fluid.
pub fn analytic_surface_drag<T: Real>(a: T, v_star: &Vec3<T>, rule: &SphereRule<T>) -> Result<Vec3<T>> {
    let a2 = a * a;
    rule.try_integrate(|n| {
        let fl = uniform_flow(&n.scale(a), a, v_star)?;
        Ok(newtonian_stress(&fl.grad, fl.p).mul_vec(n).scale(a2))
    })
}

// ---------------------------------------------------------------------------
// Annulus
// ---------------------------------------------------------------------------

/// Coefficients of `f(r) = A/r + B r + C r² + D r⁴`.
#[derive(Clone, Copy, Debug)]
pub struct AnnulusCoeffs<T> {
    /// Coefficient of `1/r`.
    pub a: T,
    /// Coefficient of `r`.
    pub b: T,
    /// Coefficient of `r²`.
    pub c: T,
    /// Coefficient of `r⁴`.
    pub d: T,
    /// Radius ratio `a/R`.
    pub lambda: T,
}

impl<T: Real> AnnulusCoeffs<T> {
    /// `f(r)`.
    pub fn f(&self, r: T) -> T {
        self.a / r + self.b * r + self.c * r * r + self.d * r.powi(4)
    }

    /// `f′(r)`.
    pub fn df(&self, r: T) -> T {
        -self.a / (r * r) + self.b + T::c(2.0) * self.c * r + T::c(4.0) * self.d * r.powi(3)
    }
}

/// Dimensionless coefficients `[η_A, η_B, η_C, η_D]` at `λ = a/R`.
pub fn annulus_eta<T: Real>(lambda: T) -> [T; 4] {
    let l = lambda;
    let one = T::one();
    let den = (one - l).powi(3) * (T::c(4.0) + T::c(7.0) * l + T::c(4.0) * l * l);
    let ea = l.powi(3) * (one + l + l * l) / den;
    let eb = -T::c(3.0) * l * (one + l + l * l + l.powi(3) + l.powi(4)) / den;
    let ec = (T::c(4.0) + l * (one + l) * (T::c(4.0) + T::c(9.0) * l * l)) / (T::c(2.0) * den);
    let ed = -T::c(3.0) * l * (one + l) / (T::c(2.0) * den);
    [ea, eb, ec, ed]
}

/// Coefficients for inner radius `a`, outer radius `R` and speed `V`.
pub fn annulus_coeffs<T: Real>(a: T, big_r: T, v: T) -> Result<AnnulusCoeffs<T>> {
    if !(a > T::zero() && a < big_r) {
        return Err(Error::InvalidInput(format!(
            "annulus needs 0 < a < R, got a = {}, R = {}",
            a.f(),
            big_r.f()
        )));
    }
    let lambda = a / big_r;
    let [ea, eb, ec, ed] = annulus_eta(lambda);
    Ok(AnnulusCoeffs {
        a: ea * big_r.powi(3) * v,
        b: eb * big_r * v,
        c: ec * v,
        d: ed * v / (big_r * big_r),
        lambda,
    })
}

/// Axisymmetric annulus flow: `u_r = 2f cosθ/r²`, `u_θ = −f′ sinθ/r`.
pub fn annulus_flow<T: Real>(r: T, theta: T, a: T, big_r: T, v: T) -> Result<(T, T, AnnulusCoeffs<T>)> {
    let co = annulus_coeffs(a, big_r, v)?;
    let slack = T::c(1e-12) * big_r;
    if r < a - slack || r > big_r + slack {
        return Err(Error::Domain {
            what: "annulus radius outside [a, R]",
            radius: r.f(),
        });
    }
    let ur = T::c(2.0) * co.f(r) * theta.cos() / (r * r);
    let ut = -co.df(r) * theta.sin() / r;
    Ok((ur, ut, co))
}

/// Cartesian annulus velocity for an arbitrary far-field vector `v*`.
pub fn annulus_velocity<T: Real>(x: &Vec3<T>, a: T, big_r: T, v_star: &Vec3<T>) -> Result<Vec3<T>> {
    let speed = v_star.norm();
    if speed == T::zero() {
        return Ok(Vec3::zero());
    }
    let e = v_star.scale(T::one() / speed);
    let co = annulus_coeffs(a, big_r, speed)?;
    let r = x.norm();
    let slack = T::c(1e-12) * big_r;
    if r < a - slack || r > big_r + slack {
        return Err(Error::Domain {
            what: "annulus radius outside [a, R]",
            radius: r.f(),
        });
    }
    let xh = x.scale(T::one() / r);
    let cos = xh.dot(&e);
    let fp = co.df(r) / r;
    Ok(e.scale(fp) + xh.scale(cos * (T::c(2.0) * co.f(r) / (r * r) - fp)))
}

/// Rescaled annulus profile `g(r) = r(v/V − 1)` in the plane transverse to
/// the flow, where `v` is the flow-direction component.
pub fn annulus_rescaled_profile<T: Real>(r: T, a: T, big_r: T) -> Result<T> {
    let co = annulus_coeffs(a, big_r, T::one())?;
    Ok(r * (co.df(r) / r - T::one()))
}
