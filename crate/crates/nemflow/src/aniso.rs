//! Anisotropy tensors `M^p`, their γ-weighted sum, the Fourier symbol and
//! the viscous stresses.

use crate::error::{Error, Result};
use crate::tensor_core::{delta, Mat3, QTensor, Real, Ring, Tensor4, Vec3};

/// Indices `p` that carry an anisotropy tensor.
pub const M_INDICES: [usize; 9] = [1, 2, 3, 4, 5, 6, 7, 10, 11];

/// Viscosity ratios `γ_p = ζ_p/ζ₈`; `γ₈ ≡ 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaSet<T> {
    g: [T; 11],
}

impl<T: Real> GammaSet<T> {
    /// All ratios zero except `γ₈ = 1`.
    pub fn zero() -> Self {
        let mut g = [T::zero(); 11];
        g[7] = T::one();
        Self { g }
    }

    /// Builds from `[γ₁, …, γ₇, γ₉, γ₁₀, γ₁₁]`.
    pub fn from_ten(v: [T; 10]) -> Self {
        let mut s = Self::zero();
        for (slot, p) in [1usize, 2, 3, 4, 5, 6, 7, 9, 10, 11].iter().enumerate() {
            s.g[p - 1] = v[slot];
        }
        s
    }

    /// The ten free ratios in the order of [`GammaSet::from_ten`].
    pub fn to_ten(&self) -> [T; 10] {
        let mut v = [T::zero(); 10];
        for (slot, p) in [1usize, 2, 3, 4, 5, 6, 7, 9, 10, 11].iter().enumerate() {
            v[slot] = self.g[p - 1];
        }
        v
    }

    /// Sets `γ_p`; `p = 8` is frozen at one.
    pub fn with(mut self, p: usize, value: T) -> Result<Self> {
        if !(1..=11).contains(&p) || p == 8 {
            return Err(Error::Unsupported {
                what: "gamma index",
                detail: format!("{p}; free indices are 1..=7 and 9..=11"),
            });
        }
        self.g[p - 1] = value;
        Ok(self)
    }

    /// `γ_p` with 1-based index.
    pub fn get(&self, p: usize) -> T {
        self.g[p - 1]
    }

    /// All eleven ratios, `γ₈` included.
    pub fn all(&self) -> [T; 11] {
        self.g
    }

    /// `|γ| = max_p |γ_p|` over the free ratios.
    pub fn max_abs(&self) -> T {
        self.to_ten().iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    /// Scales every free ratio.
    pub fn scaled(&self, s: T) -> Self {
        Self::from_ten(self.to_ten().map(|x| x * s))
    }

    /// Sums the free ratios.
    pub fn plus(&self, o: &Self) -> Self {
        let a = self.to_ten();
        let b = o.to_ten();
        Self::from_ten(std::array::from_fn(|i| a[i] + b[i]))
    }
}

/// Five-tensor basis `δ_klδ_ij, δ_kl n_i n_j, δ_ij n_k n_l, δ_ik n_l n_j,
/// n_i n_j n_k n_l` (before `k↔l` symmetrization).
pub fn basis_entry<T: Real>(b: usize, n: &Vec3<T>, i: usize, j: usize, k: usize, l: usize) -> T {
    let d = delta::<T>;
    match b {
        0 => d(k, l) * d(i, j),
        1 => d(k, l) * n[i] * n[j],
        2 => d(i, j) * n[k] * n[l],
        3 => d(i, k) * n[l] * n[j],
        _ => n[i] * n[j] * n[k] * n[l],
    }
}

/// Basis tensor `b ∈ 0..5` as a symmetrized [`Tensor4`].
pub fn basis_tensor<T: Real>(b: usize, n: &Vec3<T>) -> Tensor4<T> {
    Tensor4::from_fn(|i, j, k, l| basis_entry(b, n, i, j, k, l))
}

/// Coefficients of `M^p` in the five-tensor basis.
pub fn m_basis_coeffs<T: Real>(p: usize, s: T) -> Result<[T; 5]> {
    let c = T::c;
    let s2 = s * s;
    let v = match p {
        1 => [0.0, 1.0, 1.0, -1.0, 0.0].map(|x| c(x) * s2 * c(0.5)),
        2 => [0.0, 1.0, -1.0, 0.0, 0.0].map(|x| c(x) * s),
        3 => [0.0, 1.0, -1.0, 0.0, 0.0].map(|x| c(x) * s2 / c(6.0)),
        4 => [-2.0 / 3.0, 1.0, 1.0, 1.0, 0.0].map(|x| c(x) * s * c(0.5)),
        5 => [2.0 / 3.0, 1.0, 1.0, 1.0, 0.0].map(|x| c(x) * s2 / c(6.0)),
        6 => [0.0, 0.0, 0.0, -1.0 / 3.0, 1.0].map(|x| c(x) * s2),
        7 => [1.0, 0.0, 0.0, 0.0, 0.0].map(|x| c(x) * s2 / c(3.0)),
        10 => [0.0, 0.0, 0.0, 0.0, 1.0].map(|x| c(x) * c(2.0) * s2 * s / c(3.0)),
        11 => [0.0, 0.0, 0.0, -1.0 / 3.0, 1.0].map(|x| c(x) * c(2.0) * s2 * s2 / c(3.0)),
        8 => {
            return Err(Error::Unsupported {
                what: "anisotropy index",
                detail: "8: the isotropic viscosity carries no M tensor".into(),
            })
        }
        9 => {
            return Err(Error::Unsupported {
                what: "anisotropy index",
                detail: "9: its stress block vanishes, gamma_9 enters only the forcing".into(),
            })
        }
        _ => {
            return Err(Error::Unsupported {
                what: "anisotropy index",
                detail: format!("{p}; valid indices are {M_INDICES:?}"),
            })
        }
    };
    Ok(v)
}

/// Closed form of `M^p(s*, n*)`.
pub fn m_component<T: Real>(p: usize, s_star: T, n_star: &Vec3<T>) -> Result<Tensor4<T>> {
    let co = m_basis_coeffs(p, s_star)?;
    Ok(Tensor4::from_fn(|i, j, k, l| {
        (0..5).fold(T::zero(), |acc, b| acc + co[b] * basis_entry(b, n_star, i, j, k, l))
    }))
}

/// Assembled anisotropy tensor with its inputs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnisotropyTensor<T> {
    /// `M_γ`.
    pub m: Tensor4<T>,
    /// Viscosity ratios.
    pub gamma: GammaSet<T>,
    /// Order parameter.
    pub s_star: T,
    /// Director.
    pub n_star: Vec3<T>,
}

impl<T: Real> AnisotropyTensor<T> {
    /// Coefficients of `M_γ` in the five-tensor basis.
    pub fn basis_coeffs(&self) -> [T; 5] {
        let mut acc = [T::zero(); 5];
        for p in M_INDICES {
            let co = m_basis_coeffs(p, self.s_star).expect("valid index");
            let g = self.gamma.get(p);
            for b in 0..5 {
                acc[b] += g * co[b];
            }
        }
        acc
    }
}

/// `M_γ = Σ_p γ_p M^p`.
pub fn assemble_m<T: Real>(gamma: &GammaSet<T>, s_star: T, n_star: &Vec3<T>) -> AnisotropyTensor<T> {
    let mut m = Tensor4::zero();
    for p in M_INDICES {
        let g = gamma.get(p);
        if g != T::zero() {
            m = m.add(&m_component(p, s_star, n_star).expect("valid index").scale(g));
        }
    }
    AnisotropyTensor {
        m,
        gamma: *gamma,
        s_star,
        n_star: *n_star,
    }
}

/// Symbol `[M](ξ)_ij = M_{i,j;k,l} ξ_k ξ_l`.
pub fn symbol_matrix<T: Real>(m: &AnisotropyTensor<T>, xi: &Vec3<T>) -> Mat3<T> {
    Mat3::from_fn(|i, j| {
        let mut s = T::zero();
        for k in 0..3 {
            for l in 0..3 {
                s += m.m.get(i, j, k, l) * xi[k] * xi[l];
            }
        }
        s
    })
}

/// `I + (I − ξ̂⊗ξ̂)[M](ξ̂)` for a unit `ξ̂`.
pub fn projected_symbol<T: Real>(m: &AnisotropyTensor<T>, xi_hat: &Vec3<T>) -> Mat3<T> {
    let proj = Mat3::identity() - xi_hat.outer(xi_hat);
    Mat3::identity() + proj * symbol_matrix(m, xi_hat)
}

// ---------------------------------------------------------------------------
// Stresses
// ---------------------------------------------------------------------------

/// `(A, W)` from a velocity gradient over any [`Ring`].
pub fn strain_vorticity<S: Ring>(g: &Mat3<S>) -> (Mat3<S>, Mat3<S>) {
    let h = S::lit(0.5);
    let gt = g.transpose();
    ((*g + gt).scale(h), (*g - gt).scale(h))
}

/// Viscous stress `T_SV` with `γ₈ = 1`, over any [`Ring`].
///
/// `g` holds `γ₁…γ₁₁`; `W` enters only through `Q̊`.
pub fn tsv_core<S: Ring>(q: &Mat3<S>, a: &Mat3<S>, qr: &Mat3<S>, g: &[S; 11]) -> Mat3<S> {
    let q = *q;
    let a = *a;
    let qr = *qr;
    let q2 = q * q;
    let half = S::lit(0.5);
    let qa = q.ddot(&a);
    let qn2 = q.norm_sq();
    let t1 = q * qr - qr * q;
    let t2 = qr + q * a - a * q;
    let t3 = (q * qr + qr * q + q2 * a - a * q2).scale(half);
    let t4 = q * a + a * q;
    let t5 = q2 * a + a * q2;
    let t6 = q.scale(qa);
    let t7 = a.scale(qn2);
    let t9 = q.scale(qr.ddot(&q));
    let t10 = q.scale(q2.ddot(&a)) + q2.scale(qa);
    let t11 = q.scale(qn2 * qa);
    t1.scale(g[0])
        + t2.scale(g[1])
        + t3.scale(g[2])
        + t4.scale(g[3])
        + t5.scale(g[4])
        + t6.scale(g[5])
        + t7.scale(g[6])
        + a.scale(g[7])
        + t9.scale(g[8])
        + t10.scale(g[9])
        + t11.scale(g[10])
}

/// Viscous stress `T_SV(Q; A, Q̊)` with the isotropic term `A`.
pub fn viscous_stress_tsv<T: Real>(
    q: &QTensor<T>,
    a: &Mat3<T>,
    qring: &QTensor<T>,
    gamma: &GammaSet<T>,
) -> Mat3<T> {
    tsv_core(&q.mat(), a, &qring.mat(), &gamma.all())
}

/// Stress block `B_p[∇v]` built from `Q*`, over any [`Ring`].
///
/// Returns zero for `p = 9` and for indices without a block.
pub fn b_block_core<S: Ring>(p: usize, grad_v: &Mat3<S>, q: &Mat3<S>) -> Mat3<S> {
    let (a, w) = strain_vorticity(grad_v);
    let q = *q;
    let g = *grad_v;
    let q2 = q * q;
    match p {
        1 => q2 * w - (q * w * q).scale(S::lit(2.0)) + w * q2,
        2 => q * g - g * q,
        3 => (q2 * g - g * q2).scale(S::lit(0.5)),
        4 => q * a + a * q,
        5 => q2 * a + a * q2,
        6 => q.scale(a.ddot(&q)),
        7 => a.scale(q.norm_sq()),
        10 => q.scale(q2.ddot(&a)) + q2.scale(q.ddot(&a)),
        11 => q.scale(q.norm_sq() * a.ddot(&q)),
        _ => Mat3::zero(),
    }
}

/// `B_p[∇v]` for `p ∈ {1..7, 10, 11}`.
pub fn b_block<T: Real>(p: usize, grad_v: &Mat3<T>, q_star: &QTensor<T>) -> Result<Mat3<T>> {
    m_basis_coeffs::<T>(p, T::one())?;
    Ok(b_block_core(p, grad_v, &q_star.mat()))
}

/// `B_γ[∇v] = Σ_p γ_p B_p[∇v]`, over any [`Ring`].
pub fn b_gamma_core<S: Ring>(grad_v: &Mat3<S>, q: &Mat3<S>, g: &[S; 11]) -> Mat3<S> {
    let mut acc = Mat3::zero();
    for p in M_INDICES {
        acc += b_block_core(p, grad_v, q).scale(g[p - 1]);
    }
    acc
}

/// Reduced stress `T_γ = ∇v + ∇vᵀ + B_γ(∇v) − pI` with
/// `(B_γ)_ij = M_{i,m;k,j} ∂_k v_m`.
pub fn t_gamma_stress<T: Real>(grad_v: &Mat3<T>, p: T, m: &AnisotropyTensor<T>) -> Result<Mat3<T>> {
    let tol = T::c(1e-10) * grad_v.max_abs().max(T::one());
    if grad_v.trace().abs() > tol {
        return Err(Error::InvalidInput(format!(
            "velocity gradient is not solenoidal (tr = {:.3e})",
            grad_v.trace().f()
        )));
    }
    Ok(t_gamma_stress_unchecked(grad_v, p, m))
}

/// [`t_gamma_stress`] without the incompressibility check, for discrete
/// gradients whose trace is only small to truncation order.
pub fn t_gamma_stress_unchecked<T: Real>(grad_v: &Mat3<T>, p: T, m: &AnisotropyTensor<T>) -> Mat3<T> {
    let b = Mat3::from_fn(|i, j| {
        let mut s = T::zero();
        for mm in 0..3 {
            for k in 0..3 {
                s += m.m.get(i, mm, k, j) * grad_v.0[mm][k];
            }
        }
        s
    });
    *grad_v + grad_v.transpose() + b - Mat3::identity().scale(p)
}
