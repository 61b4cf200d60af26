//! Shared helpers for the integration tests.
#![allow(dead_code)]

use nemflow::aniso::GammaSet;
use nemflow::{Mat3d, Rank3, Vec3d};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic generator.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform vector in `[-1, 1]³`.
pub fn rand_vec(r: &mut impl Rng) -> Vec3d {
    nemflow::Vec3(std::array::from_fn(|_| r.gen_range(-1.0..1.0)))
}

/// Uniform unit vector.
pub fn rand_unit(r: &mut impl Rng) -> Vec3d {
    loop {
        let v = rand_vec(r);
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v.scale(1.0 / n);
        }
    }
}

/// Point with `lo ≤ |x| ≤ hi`.
pub fn rand_point(r: &mut impl Rng, lo: f64, hi: f64) -> Vec3d {
    rand_unit(r).scale(r.gen_range(lo..hi))
}

/// Random matrix with entries in `[-1, 1]`.
pub fn rand_mat(r: &mut impl Rng) -> Mat3d {
    nemflow::Mat3(std::array::from_fn(|_| std::array::from_fn(|_| r.gen_range(-1.0..1.0))))
}

/// Random traceless matrix.
pub fn rand_traceless(r: &mut impl Rng) -> Mat3d {
    let m = rand_mat(r);
    m - Mat3d::identity().scale(m.trace() / 3.0)
}

/// Random symmetric traceless matrix.
pub fn rand_q(r: &mut impl Rng) -> Mat3d {
    let m = rand_mat(r).sym();
    m - Mat3d::identity().scale(m.trace() / 3.0)
}

/// Random viscosity ratios with `|γ_p| ≤ scale`.
pub fn rand_gamma(r: &mut impl Rng, scale: f64) -> GammaSet<f64> {
    GammaSet::from_ten(std::array::from_fn(|_| r.gen_range(-scale..scale)))
}

/// Polynomial in three variables as `(exponents, coefficient)` terms.
#[derive(Clone, Debug)]
pub struct Poly(pub Vec<([i32; 3], f64)>);

impl Poly {
    /// Random homogeneous polynomial of degree `deg`.
    pub fn random(r: &mut impl Rng, deg: i32) -> Self {
        let mut t = Vec::new();
        for a in 0..=deg {
            for b in 0..=(deg - a) {
                t.push(([a, b, deg - a - b], r.gen_range(-1.0..1.0)));
            }
        }
        Poly(t)
    }

    pub fn diff(&self, k: usize) -> Self {
        Poly(
            self.0
                .iter()
                .filter(|(e, _)| e[k] > 0)
                .map(|(e, c)| {
                    let mut e2 = *e;
                    e2[k] -= 1;
                    (e2, c * e[k] as f64)
                })
                .collect(),
        )
    }

    pub fn eval(&self, x: &Vec3d) -> f64 {
        self.0
            .iter()
            .map(|(e, c)| c * x[0].powi(e[0]) * x[1].powi(e[1]) * x[2].powi(e[2]))
            .sum()
    }
}

/// Divergence-free polynomial field `v = ∇×ψ`.
#[derive(Clone, Debug)]
pub struct CurlField {
    pub v: [Poly; 3],
}

impl CurlField {
    /// Field of degree `deg` from a random potential of degree `deg + 1`.
    pub fn random(r: &mut impl Rng, deg: i32) -> Self {
        let psi: [Poly; 3] = std::array::from_fn(|_| Poly::random(r, deg + 1));
        let comp = |i: usize| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let mut t = psi[k].diff(j).0;
            t.extend(psi[j].diff(k).0.into_iter().map(|(e, c)| (e, -c)));
            Poly(t)
        };
        Self { v: [comp(0), comp(1), comp(2)] }
    }

    pub fn value(&self, x: &Vec3d) -> Vec3d {
        Vec3d::from_fn(|i| self.v[i].eval(x))
    }

    /// `(∇v)_ij = ∂_j v_i`.
    pub fn grad(&self, x: &Vec3d) -> Mat3d {
        Mat3d::from_fn(|i, j| self.v[i].diff(j).eval(x))
    }

    /// `d2[i][k][l] = ∂_kl v_i`.
    pub fn hess(&self, x: &Vec3d) -> Rank3<f64> {
        Rank3::from_fn(|i, k, l| self.v[i].diff(k).diff(l).eval(x))
    }
}

/// Relative error with a unit floor on the reference.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

pub fn rel_vec(a: &Vec3d, b: &Vec3d) -> f64 {
    (*a - *b).norm() / b.norm().max(1e-300)
}

pub fn rel_mat(a: &Mat3d, b: &Mat3d) -> f64 {
    (*a - *b).norm() / b.norm().max(1e-300)
}
