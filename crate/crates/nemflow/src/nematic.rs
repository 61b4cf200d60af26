//! The explicit Q-tensor field around the particle, the Landau–de Gennes
//! potential and the dissipation function.

use crate::error::{Error, Result};
use crate::stokes_iso::{f_tensor, inv_r};
use crate::tensor_core::{Mat3, QTensor, Rank3, Rank4, Real, Vec3};

/// Anchoring and far-field order of the nematic. The particle radius is 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NematicParams<T> {
    /// Anchoring strength `w > 0`.
    pub w: T,
    /// Scalar order parameter `s*`.
    pub s_star: T,
    /// Far-field director (unit).
    pub n_star: Vec3<T>,
}

impl<T: Real> NematicParams<T> {
    /// Validates `w > 0` and normalizes `n*`.
    pub fn new(w: T, s_star: T, n_star: Vec3<T>) -> Result<Self> {
        if !(w > T::zero()) || !w.is_finite() {
            return Err(Error::InvalidInput(format!(
                "anchoring strength must be positive, got {}",
                w.f()
            )));
        }
        if !s_star.is_finite() {
            return Err(Error::InvalidInput("s_star must be finite".into()));
        }
        let n_star = n_star
            .normalized()
            .ok_or(Error::InvalidInput("n_star must be nonzero".into()))?;
        Ok(Self { w, s_star, n_star })
    }

    /// Far-field state `Q* = s*(n*⊗n* − I/3)`.
    pub fn q_star(&self) -> QTensor<T> {
        QTensor::nematic(self.s_star, &self.n_star)
    }
}

/// Landau–de Gennes coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LdgCoeffs<T> {
    /// `A > 0`.
    pub a: T,
    /// `B`.
    pub b: T,
    /// `C > 0`.
    pub c: T,
}

impl<T: Real> LdgCoeffs<T> {
    /// Validates `A > 0` and `C > 0`.
    pub fn new(a: T, b: T, c: T) -> Result<Self> {
        if !(a > T::zero() && c > T::zero()) {
            return Err(Error::InvalidInput(format!(
                "Landau-de Gennes needs A > 0 and C > 0, got A = {}, C = {}",
                a.f(),
                c.f()
            )));
        }
        Ok(Self { a, b, c })
    }
}

/// Viscosities `ζ₁…ζ₁₁`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaSet<T>(pub [T; 11]);

impl<T: Real> ZetaSet<T> {
    /// Validates `ζ₈ > 0`.
    pub fn new(z: [T; 11]) -> Result<Self> {
        if !(z[7] > T::zero()) {
            return Err(Error::InvalidInput("zeta_8 must be positive".into()));
        }
        Ok(Self(z))
    }

    /// `ζ_i` with 1-based index.
    pub fn get(&self, i: usize) -> T {
        self.0[i - 1]
    }
}

/// Nematic order `s*` minimizing the potential over uniaxial states.
pub fn s_star<T: Real>(coeffs: &LdgCoeffs<T>) -> Result<T> {
    let LdgCoeffs { a, b, c } = *coeffs;
    let root = (b * b + T::c(24.0) * a * c).sqrt();
    if b > T::zero() {
        Ok(-(b + root) / (T::c(4.0) * c))
    } else if b < T::zero() {
        Ok((-b + root) / (T::c(4.0) * c))
    } else {
        Err(Error::InvalidInput(
            "branch undefined for B = 0; supply s_star directly".into(),
        ))
    }
}

/// Q-tensor with gradient `grad[k][i][j] = ∂_k Q_ij` and Hessian
/// `hess[k][l][i][j] = ∂_kl Q_ij`.
#[derive(Clone, Copy, Debug)]
pub struct QSample<T> {
    /// Value.
    pub q: QTensor<T>,
    /// Gradient.
    pub grad: Rank3<T>,
    /// Hessian.
    pub hess: Rank4<T>,
}

/// Harmonic Q-field `Q = (1 − w/((1+w)r))Q* + (w/(3+w)) r⁻³ Q_b`, with
/// `Q_b = s*(x̂⊗x̂ − I/3)`, for `|x| ≥ 1`.
pub fn q_field<T: Real>(x: &Vec3<T>, params: &NematicParams<T>) -> Result<QSample<T>> {
    let r = x.norm();
    if r < T::c(1.0 - 1e-12) {
        return Err(Error::Domain {
            what: "Q-field inside the particle",
            radius: r.f(),
        });
    }
    q_field_extended(x, params)
}

/// Same closed form as [`q_field`], evaluated at any `x ≠ 0`.
///
/// The grid solver uses it to extend `Q` smoothly into cut cells.
pub fn q_field_extended<T: Real>(x: &Vec3<T>, params: &NematicParams<T>) -> Result<QSample<T>> {
    let (ir, dir, hir) = inv_r(x)?;
    let f = f_tensor(x)?;
    let w = params.w;
    let qs = params.q_star().mat();
    let cq = -w / (T::one() + w);
    let cf = w * params.s_star / (T::c(3.0) * (T::c(3.0) + w));
    let q = qs.scale(T::one() + cq * ir) + f.m.scale(cf);
    let grad = Rank3::from_fn(|k, i, j| cq * dir[k] * qs.0[i][j] + cf * f.d.0[k][i][j]);
    let hess = Rank4::from_fn(|k, l, i, j| cq * hir.0[k][l] * qs.0[i][j] + cf * f.d2.0[k][l][i][j]);
    Ok(QSample {
        q: QTensor::project(&q),
        grad,
        hess,
    })
}

/// Potential `f(Q)` and its derivative over symmetric traceless matrices.
pub fn ldg_potential<T: Real>(q: &QTensor<T>, coeffs: &LdgCoeffs<T>) -> (T, QTensor<T>) {
    let m = q.mat();
    let m2 = m * m;
    let tr2 = m2.trace();
    let tr3 = (m2 * m).trace();
    let f = -coeffs.a * T::c(0.5) * tr2 + coeffs.b / T::c(3.0) * tr3 + coeffs.c * T::c(0.25) * tr2 * tr2;
    let df = m.scale(-coeffs.a)
        + (m2 - Mat3::identity().scale(tr2 / T::c(3.0))).scale(coeffs.b)
        + m.scale(coeffs.c * tr2);
    (f, QTensor::project(&df))
}

/// Dissipation function `R(Q; A, Q̊)` with all eleven terms.
pub fn dissipation_r<T: Real>(q: &QTensor<T>, a: &Mat3<T>, qring: &QTensor<T>, z: &ZetaSet<T>) -> T {
    let q = q.mat();
    let qr = qring.mat();
    let h = T::c(0.5);
    let q2 = q * q;
    let qa = q.ddot(a);
    let qn2 = q.norm_sq();
    let an2 = a.norm_sq();
    z.get(1) * h * qr.ddot(&qr)
        + z.get(2) * a.ddot(&qr)
        + z.get(3) * (qr * q).ddot(a)
        + z.get(4) * q.ddot(&(*a * *a))
        + z.get(5) * q2.ddot(&(*a * *a))
        + z.get(6) * h * qa * qa
        + z.get(7) * h * an2 * qn2
        + z.get(8) * h * an2
        + z.get(9) * qr.ddot(&q) * qa
        + z.get(10) * q2.ddot(a) * qa
        + z.get(11) * h * qn2 * qa * qa
}
