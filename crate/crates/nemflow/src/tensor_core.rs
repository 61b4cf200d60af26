//! Fixed-size vector, matrix and fourth-order tensor arithmetic.
//!
//! Index conventions used across the crate:
//! - `(∇v)_ij = ∂_j v_i`.
//! - A gradient of a matrix field is a [`Rank3`] with `g[k][i][j] = ∂_k Q_ij`.
//! - A Hessian of a matrix field is a [`Rank4`] with `h[k][l][i][j] = ∂_kl Q_ij`.
//! - Second partials of a vector field are a [`Rank3`] with `d[j][k][l] = ∂_kl v_j`.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{Float, FromPrimitive, One, Zero};

use crate::error::{Error, Result};

/// Commutative ring with the operations needed by the stress formulas.
///
/// Implemented by `f32`, `f64` and [`Dual`], so polynomial expressions can be
/// differentiated exactly.
pub trait Ring:
    Copy
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    /// Embeds an `f64` literal.
    fn lit(x: f64) -> Self;
}

impl Ring for f64 {
    fn lit(x: f64) -> Self {
        x
    }
}

impl Ring for f32 {
    fn lit(x: f64) -> Self {
        x as f32
    }
}

/// Floating-point scalar used by the analytic modules.
pub trait Real: Ring + Float + FromPrimitive + Display {
    /// Converts an `f64` constant.
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    /// Converts to `f64`.
    fn f(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl<T: Ring + Float + FromPrimitive + Display> Real for T {}

/// Kronecker delta.
#[inline]
pub fn delta<T: Ring>(i: usize, j: usize) -> T {
    if i == j {
        T::one()
    } else {
        T::zero()
    }
}

// ---------------------------------------------------------------------------
// Vec3
// ---------------------------------------------------------------------------

/// Three-component vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec3<T>(pub [T; 3]);

impl<T: Ring> Vec3<T> {
    /// Builds a vector from components.
    pub fn new(x: T, y: T, z: T) -> Self {
        Self([x, y, z])
    }

    /// Zero vector.
    pub fn zero() -> Self {
        Self([T::zero(); 3])
    }

    /// Coordinate vector `e_i`.
    pub fn unit(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = T::one();
        v
    }

    /// Builds a vector from a component function.
    pub fn from_fn(f: impl Fn(usize) -> T) -> Self {
        Self([f(0), f(1), f(2)])
    }

    /// Euclidean inner product.
    pub fn dot(&self, o: &Self) -> T {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    /// Squared norm.
    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    /// Cross product.
    pub fn cross(&self, o: &Self) -> Self {
        let a = &self.0;
        let b = &o.0;
        Self([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    /// Outer product `a ⊗ b`.
    pub fn outer(&self, o: &Self) -> Mat3<T> {
        Mat3::from_fn(|i, j| self.0[i] * o.0[j])
    }

    /// Multiplies by a scalar.
    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(|i| self.0[i] * s)
    }

    /// Applies a map to each component.
    pub fn map<U: Ring>(&self, f: impl Fn(T) -> U) -> Vec3<U> {
        Vec3([f(self.0[0]), f(self.0[1]), f(self.0[2])])
    }
}

impl<T: Real> Vec3<T> {
    /// Euclidean norm.
    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() && n.is_finite() {
            Some(self.scale(T::one() / n))
        } else {
            None
        }
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    /// Converts to `f64` components.
    pub fn to_f64(&self) -> [f64; 3] {
        [self.0[0].f(), self.0[1].f(), self.0[2].f()]
    }

    /// Builds from `f64` components.
    pub fn from_f64(v: [f64; 3]) -> Self {
        Self([T::c(v[0]), T::c(v[1]), T::c(v[2])])
    }
}

impl<T> Index<usize> for Vec3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> IndexMut<usize> for Vec3<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T: Ring> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::from_fn(|i| self.0[i] + o.0[i])
    }
}

impl<T: Ring> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::from_fn(|i| self.0[i] - o.0[i])
    }
}

impl<T: Ring> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i| -self.0[i])
    }
}

impl<T: Ring> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

impl<T: Ring> AddAssign for Vec3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

// ---------------------------------------------------------------------------
// Mat3
// ---------------------------------------------------------------------------

/// 3×3 matrix with row-major indexing `(i, j)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3<T>(pub [[T; 3]; 3]);

impl<T: Ring> Mat3<T> {
    /// Zero matrix.
    pub fn zero() -> Self {
        Self([[T::zero(); 3]; 3])
    }

    /// Identity matrix.
    pub fn identity() -> Self {
        Self::from_fn(delta)
    }

    /// Builds a matrix from an entry function.
    pub fn from_fn(f: impl Fn(usize, usize) -> T) -> Self {
        Self([
            [f(0, 0), f(0, 1), f(0, 2)],
            [f(1, 0), f(1, 1), f(1, 2)],
            [f(2, 0), f(2, 1), f(2, 2)],
        ])
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    /// Trace.
    pub fn trace(&self) -> T {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Frobenius inner product `A·B = A_ij B_ij`.
    pub fn ddot(&self, o: &Self) -> T {
        let mut s = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                s += self.0[i][j] * o.0[i][j];
            }
        }
        s
    }

    /// Squared Frobenius norm.
    pub fn norm_sq(&self) -> T {
        self.ddot(self)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &Vec3<T>) -> Vec3<T> {
        Vec3::from_fn(|i| self.0[i][0] * v.0[0] + self.0[i][1] * v.0[1] + self.0[i][2] * v.0[2])
    }

    /// Vector-matrix product `vᵀA`.
    pub fn tmul_vec(&self, v: &Vec3<T>) -> Vec3<T> {
        Vec3::from_fn(|j| v.0[0] * self.0[0][j] + v.0[1] * self.0[1][j] + v.0[2] * self.0[2][j])
    }

    /// Multiplies by a scalar.
    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    /// Symmetric part `(A + Aᵀ)/2`, computed without division.
    pub fn sym_half(&self, half: T) -> Self {
        Self::from_fn(|i, j| (self.0[i][j] + self.0[j][i]) * half)
    }

    /// Determinant.
    pub fn det(&self) -> T {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Row `i`.
    pub fn row(&self, i: usize) -> Vec3<T> {
        Vec3(self.0[i])
    }

    /// Column `j`.
    pub fn col(&self, j: usize) -> Vec3<T> {
        Vec3::from_fn(|i| self.0[i][j])
    }

    /// Builds a matrix from its columns.
    pub fn from_cols(c: [Vec3<T>; 3]) -> Self {
        Self::from_fn(|i, j| c[j].0[i])
    }

    /// Applies a map to each entry.
    pub fn map<U: Ring>(&self, f: impl Fn(T) -> U) -> Mat3<U> {
        Mat3::from_fn(|i, j| f(self.0[i][j]))
    }
}

impl<T: Real> Mat3<T> {
    /// Frobenius norm.
    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for r in &self.0 {
            for x in r {
                m = m.max(x.abs());
            }
        }
        m
    }

    /// Symmetric part.
    pub fn sym(&self) -> Self {
        self.sym_half(T::c(0.5))
    }

    /// Antisymmetric part.
    pub fn antisym(&self) -> Self {
        let h = T::c(0.5);
        Self::from_fn(|i, j| (self.0[i][j] - self.0[j][i]) * h)
    }

    /// True if `|A − Aᵀ| ≤ tol·max(|A|, 1)`.
    pub fn is_symmetric(&self, tol: T) -> bool {
        (*self - self.transpose()).norm() <= tol * self.norm().max(T::one())
    }

    /// Inverse by cofactors, or `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == T::zero() || !d.is_finite() {
            return None;
        }
        let m = &self.0;
        let cof = |a: usize, b: usize, c: usize, e: usize| m[a][b] * m[c][e] - m[a][e] * m[c][b];
        let inv = Self([
            [cof(1, 1, 2, 2), -cof(0, 1, 2, 2), cof(0, 1, 1, 2)],
            [-cof(1, 0, 2, 2), cof(0, 0, 2, 2), -cof(0, 0, 1, 2)],
            [cof(1, 0, 2, 1), -cof(0, 0, 2, 1), cof(0, 0, 1, 1)],
        ]);
        Some(inv.scale(T::one() / d))
    }

    /// Eigenvalues and eigenvectors (columns) of a symmetric matrix by
    /// cyclic Jacobi rotations. Eigenvalues are sorted ascending.
    pub fn sym_eigen(&self) -> ([T; 3], Self) {
        let mut a = self.sym();
        let mut v = Self::identity();
        let eps = T::epsilon();
        for _ in 0..64 {
            let off = a.0[0][1].abs() + a.0[0][2].abs() + a.0[1][2].abs();
            if off <= eps * a.norm().max(T::min_positive_value()) {
                break;
            }
            for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
                let apq = a.0[p][q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a.0[q][q] - a.0[p][p]) / (T::c(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let mut j = Self::identity();
                j.0[p][p] = c;
                j.0[q][q] = c;
                j.0[p][q] = s;
                j.0[q][p] = -s;
                a = j.transpose() * a * j;
                v = v * j;
            }
        }
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&x, &y| a.0[x][x].partial_cmp(&a.0[y][y]).unwrap_or(std::cmp::Ordering::Equal));
        let vals = [a.0[idx[0]][idx[0]], a.0[idx[1]][idx[1]], a.0[idx[2]][idx[2]]];
        let vecs = Self::from_cols([v.col(idx[0]), v.col(idx[1]), v.col(idx[2])]);
        (vals, vecs)
    }

    /// Smallest singular value, from the eigenvalues of `AᵀA`.
    pub fn min_singular_value(&self) -> T {
        let ata = self.transpose() * *self;
        let (vals, _) = ata.sym_eigen();
        vals[0].max(T::zero()).sqrt()
    }
}

impl<T> Index<(usize, usize)> for Mat3<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.0[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat3<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.0[i][j]
    }
}

impl<T: Ring> Add for Mat3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + o.0[i][j])
    }
}

impl<T: Ring> Sub for Mat3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - o.0[i][j])
    }
}

impl<T: Ring> Neg for Mat3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

impl<T: Ring> Mul for Mat3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::from_fn(|i, j| {
            self.0[i][0] * o.0[0][j] + self.0[i][1] * o.0[1][j] + self.0[i][2] * o.0[2][j]
        })
    }
}

impl<T: Ring> Mul<T> for Mat3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

impl<T: Ring> AddAssign for Mat3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

/// Splits a velocity gradient into rate of strain `A` and vorticity `W`.
///
/// `A = (∇v + ∇vᵀ)/2`, `W = (∇v − ∇vᵀ)/2`, so `A + W = ∇v`.
pub fn sym_antisym_split<T: Real>(grad_v: &Mat3<T>) -> (Mat3<T>, Mat3<T>) {
    (grad_v.sym(), grad_v.antisym())
}

// ---------------------------------------------------------------------------
// QTensor
// ---------------------------------------------------------------------------

/// Symmetric traceless 3×3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QTensor<T>(Mat3<T>);

impl<T: Real> QTensor<T> {
    /// Validates symmetry and tracelessness to `1e-12·|Q|`.
    pub fn new(m: Mat3<T>) -> Result<Self> {
        let scale = m.norm().max(T::min_positive_value());
        let tol = T::c(1e-12) * scale;
        if m.trace().abs() > tol || (m - m.transpose()).norm() > tol {
            return Err(Error::InvalidInput(format!(
                "matrix is not symmetric traceless (tr = {:.3e})",
                m.trace().f()
            )));
        }
        Ok(Self(m))
    }

    /// Projects an arbitrary matrix onto the symmetric traceless subspace.
    pub fn project(m: &Mat3<T>) -> Self {
        let s = m.sym();
        let t = s.trace() / T::c(3.0);
        Self(s - Mat3::identity().scale(t))
    }

    /// Uniaxial nematic state `s(n⊗n − I/3)`.
    pub fn nematic(s: T, n: &Vec3<T>) -> Self {
        let third = T::c(1.0 / 3.0);
        Self(Mat3::from_fn(|i, j| s * (n[i] * n[j] - delta::<T>(i, j) * third)))
    }

    /// Zero tensor.
    pub fn zero() -> Self {
        Self(Mat3::zero())
    }
}

impl<T: Copy> QTensor<T> {
    /// Underlying matrix.
    pub fn mat(&self) -> Mat3<T> {
        self.0
    }
}

// ---------------------------------------------------------------------------
// Rank-3 and rank-4 arrays
// ---------------------------------------------------------------------------

/// Rank-3 array `a[p][q][r]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rank3<T>(pub [[[T; 3]; 3]; 3]);

impl<T: Ring> Rank3<T> {
    /// Zero array.
    pub fn zero() -> Self {
        Self([[[T::zero(); 3]; 3]; 3])
    }

    /// Builds from an entry function.
    pub fn from_fn(f: impl Fn(usize, usize, usize) -> T) -> Self {
        let mut a = Self::zero();
        for p in 0..3 {
            for q in 0..3 {
                for r in 0..3 {
                    a.0[p][q][r] = f(p, q, r);
                }
            }
        }
        a
    }

    /// Slice `a[p]` as a matrix.
    pub fn slice(&self, p: usize) -> Mat3<T> {
        Mat3(self.0[p])
    }

    /// Builds from three matrix slices.
    pub fn from_slices(s: [Mat3<T>; 3]) -> Self {
        Self([s[0].0, s[1].0, s[2].0])
    }

    /// Sum with another array.
    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(|p, q, r| self.0[p][q][r] + o.0[p][q][r])
    }

    /// Multiplies by a scalar.
    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(|p, q, r| self.0[p][q][r] * s)
    }
}

/// Rank-4 array `a[p][q][r][s]` without symmetry constraints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rank4<T>(pub [[[[T; 3]; 3]; 3]; 3]);

impl<T: Ring> Rank4<T> {
    /// Zero array.
    pub fn zero() -> Self {
        Self([[[[T::zero(); 3]; 3]; 3]; 3])
    }

    /// Builds from an entry function.
    pub fn from_fn(f: impl Fn(usize, usize, usize, usize) -> T) -> Self {
        let mut a = Self::zero();
        for p in 0..3 {
            for q in 0..3 {
                for r in 0..3 {
                    for s in 0..3 {
                        a.0[p][q][r][s] = f(p, q, r, s);
                    }
                }
            }
        }
        a
    }

    /// Slice `a[p][q]` as a matrix.
    pub fn slice(&self, p: usize, q: usize) -> Mat3<T> {
        Mat3(self.0[p][q])
    }

    /// Sum with another array.
    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(|p, q, r, s| self.0[p][q][r][s] + o.0[p][q][r][s])
    }

    /// Multiplies by a scalar.
    pub fn scale(&self, c: T) -> Self {
        Self::from_fn(|p, q, r, s| self.0[p][q][r][s] * c)
    }
}

// ---------------------------------------------------------------------------
// Tensor4
// ---------------------------------------------------------------------------

/// Fourth-order tensor `M_{i,j;k,l}` stored symmetrized in `(k, l)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tensor4<T>(Rank4<T>);

impl<T: Real> Tensor4<T> {
    /// Zero tensor.
    pub fn zero() -> Self {
        Self(Rank4::zero())
    }

    /// Builds from an entry function and symmetrizes in `(k, l)`.
    pub fn from_fn(f: impl Fn(usize, usize, usize, usize) -> T) -> Self {
        Self::from_raw(&Rank4::from_fn(f))
    }

    /// Symmetrizes a raw array in its last two indices.
    pub fn from_raw(raw: &Rank4<T>) -> Self {
        let h = T::c(0.5);
        Self(Rank4::from_fn(|i, j, k, l| {
            if k == l {
                raw.0[i][j][k][l]
            } else {
                (raw.0[i][j][k][l] + raw.0[i][j][l][k]) * h
            }
        }))
    }

    /// Entry `M_{i,j;k,l}`.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        self.0 .0[i][j][k][l]
    }

    /// Underlying symmetrized array.
    pub fn raw(&self) -> &Rank4<T> {
        &self.0
    }

    /// Sum with another tensor.
    pub fn add(&self, o: &Self) -> Self {
        Self(self.0.add(&o.0))
    }

    /// Multiplies by a scalar.
    pub fn scale(&self, s: T) -> Self {
        Self(self.0.scale(s))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        m = m.max(self.get(i, j, k, l).abs());
                    }
                }
            }
        }
        m
    }
}

/// Contraction `(M:D²v)_i = M_{i,j;k,l} ∂_kl v_j` with `d2v[j][k][l] = ∂_kl v_j`.
pub fn contract_m_d2<T: Real>(m: &Tensor4<T>, d2v: &Rank3<T>) -> Vec3<T> {
    Vec3::from_fn(|i| {
        let mut s = T::zero();
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    s += m.get(i, j, k, l) * d2v.0[j][k][l];
                }
            }
        }
        s
    })
}

/// Contraction with a matrix field: `(M:D²Φ)_ij = M_{i,m;k,l} ∂_kl Φ_mj`,
/// where `h[k][l][m][j] = ∂_kl Φ_mj`.
pub fn contract_m_d2_mat<T: Real>(m: &Tensor4<T>, h: &Rank4<T>) -> Mat3<T> {
    Mat3::from_fn(|i, j| {
        let mut s = T::zero();
        for mm in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    s += m.get(i, mm, k, l) * h.0[k][l][mm][j];
                }
            }
        }
        s
    })
}

// ---------------------------------------------------------------------------
// Dual numbers
// ---------------------------------------------------------------------------

/// Forward-mode dual number `re + eps·ε` with `ε² = 0`.
///
/// Evaluating a polynomial expression on duals yields its directional
/// derivative in `eps` exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    /// Value part.
    pub re: T,
    /// Derivative part.
    pub eps: T,
}

impl<T: Real> Dual<T> {
    /// Builds a dual number.
    pub fn new(re: T, eps: T) -> Self {
        Self { re, eps }
    }

    /// Constant with zero derivative.
    pub fn cst(re: T) -> Self {
        Self { re, eps: T::zero() }
    }
}

impl<T: Real> Ring for Dual<T> {
    fn lit(x: f64) -> Self {
        Self::cst(T::c(x))
    }
}

impl<T: Real> Zero for Dual<T> {
    fn zero() -> Self {
        Self::cst(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
}

impl<T: Real> One for Dual<T> {
    fn one() -> Self {
        Self::cst(T::one())
    }
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.eps + o.eps)
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.eps - o.eps)
    }
}

impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re, self.re * o.eps + self.eps * o.re)
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.eps)
    }
}

impl<T: Real> AddAssign for Dual<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> SubAssign for Dual<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> MulAssign for Dual<T> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

/// Lifts a matrix with a tangent into dual entries.
pub fn dual_mat<T: Real>(re: &Mat3<T>, eps: &Mat3<T>) -> Mat3<Dual<T>> {
    Mat3::from_fn(|i, j| Dual::new(re.0[i][j], eps.0[i][j]))
}

/// Lifts a vector with a tangent into dual entries.
pub fn dual_vec<T: Real>(re: &Vec3<T>, eps: &Vec3<T>) -> Vec3<Dual<T>> {
    Vec3::from_fn(|i| Dual::new(re.0[i], eps.0[i]))
}
