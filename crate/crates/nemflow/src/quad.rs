//! Quadrature rules: unit sphere, great circles, log-regularized radial
//! integrals and truncated exterior-volume integrals.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::tensor_core::{Mat3, Real, Vec3};

/// Largest supported sphere-rule degree.
pub const MAX_SPHERE_DEGREE: usize = 128;

/// Default regularization radius for [`radial_log_integral`].
pub const DEFAULT_EPSILON: f64 = 1e-4;

/// Default outer radius of the panelled radial range.
pub const DEFAULT_R_TAIL: f64 = 64.0;

/// Values that can be accumulated by a quadrature rule.
pub trait QuadValue<T: Real>:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self>
{
    /// Additive identity.
    fn zero_value() -> Self;
    /// Size used for convergence tests.
    fn magnitude(&self) -> T;
}

impl QuadValue<f64> for f64 {
    fn zero_value() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue<f32> for f32 {
    fn zero_value() -> Self {
        0.0
    }
    fn magnitude(&self) -> f32 {
        self.abs()
    }
}

impl<T: Real> QuadValue<T> for Vec3<T> {
    fn zero_value() -> Self {
        Vec3::zero()
    }
    fn magnitude(&self) -> T {
        self.max_abs()
    }
}

impl<T: Real> QuadValue<T> for Mat3<T> {
    fn zero_value() -> Self {
        Mat3::zero()
    }
    fn magnitude(&self) -> T {
        self.max_abs()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, computed in `f64` by
/// Newton iteration on the three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Fixed-order Gauss–Legendre rule mapped to arbitrary intervals.
#[derive(Clone, Debug)]
pub struct GaussRule<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussRule<T> {
    /// `n`-point rule.
    pub fn new(n: usize) -> Self {
        let (x, w) = gauss_legendre(n);
        Self {
            nodes: x.into_iter().map(T::c).collect(),
            weights: w.into_iter().map(T::c).collect(),
        }
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let h = (b - a) * T::c(0.5);
        let mid = (a + b) * T::c(0.5);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + h * x, w * h))
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<V: QuadValue<T>>(&self, a: T, b: T, f: &mut impl FnMut(T) -> V) -> V {
        let mut s = V::zero_value();
        for (x, w) in self.mapped(a, b) {
            s = s + f(x) * w;
        }
        s
    }

    /// Adaptive bisection until the coarse and refined estimates agree to `tol`.
    pub fn adaptive<V: QuadValue<T>>(
        &self,
        a: T,
        b: T,
        tol: T,
        f: &mut impl FnMut(T) -> V,
    ) -> Result<V> {
        let coarse = self.integrate(a, b, f);
        self.refine(a, b, coarse, tol, f, 0)
    }

    fn refine<V: QuadValue<T>>(
        &self,
        a: T,
        b: T,
        coarse: V,
        tol: T,
        f: &mut impl FnMut(T) -> V,
        depth: usize,
    ) -> Result<V> {
        let m = (a + b) * T::c(0.5);
        let left = self.integrate(a, m, f);
        let right = self.integrate(m, b, f);
        let fine = left + right;
        if (fine - coarse).magnitude() <= tol {
            return Ok(fine);
        }
        if depth >= 48 {
            return Err(Error::Quadrature(format!(
                "adaptive panel [{:.3e}, {:.3e}] not converged (diff {:.3e})",
                a.f(),
                b.f(),
                (fine - coarse).magnitude().f()
            )));
        }
        let half = tol * T::c(0.5);
        let l = self.refine(a, m, left, half, f, depth + 1)?;
        let r = self.refine(m, b, right, half, f, depth + 1)?;
        Ok(l + r)
    }
}

// ---------------------------------------------------------------------------
// Sphere
// ---------------------------------------------------------------------------

/// Quadrature rule on the unit sphere.
#[derive(Clone, Debug)]
pub struct SphereRule<T> {
    /// Unit nodes.
    pub nodes: Vec<Vec3<T>>,
    /// Weights summing to `4π`.
    pub weights: Vec<T>,
    /// Polynomial exactness degree.
    pub degree: usize,
}

/// Product rule exact for spherical polynomials of total degree `degree`.
///
/// Gauss–Legendre in `cos θ` times the trapezoid rule in azimuth.
pub fn sphere_quadrature<T: Real>(degree: usize) -> Result<SphereRule<T>> {
    if !(2..=MAX_SPHERE_DEGREE).contains(&degree) {
        return Err(Error::Unsupported {
            what: "sphere degree",
            detail: format!("{degree}; supported degrees are 2..={MAX_SPHERE_DEGREE}"),
        });
    }
    let nt = degree / 2 + 1;
    let np = degree + 1;
    let (z, wz) = gauss_legendre(nt);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut nodes = Vec::with_capacity(nt * np);
    let mut weights = Vec::with_capacity(nt * np);
    for (zi, wi) in z.iter().zip(&wz) {
        let s = (1.0 - zi * zi).sqrt();
        for k in 0..np {
            let phi = two_pi * (k as f64 + 0.5) / np as f64;
            nodes.push(Vec3::from_f64([s * phi.cos(), s * phi.sin(), *zi]));
            weights.push(T::c(wi * two_pi / np as f64));
        }
    }
    Ok(SphereRule {
        nodes,
        weights,
        degree,
    })
}

/// Orthonormal frame `(e1, e2, axis)` with `e1 × e2 = axis`.
///
/// For `axis = e₃` the frame is the standard basis.
pub fn frame_for<T: Real>(axis: &Vec3<T>) -> Result<[Vec3<T>; 3]> {
    let a = axis
        .normalized()
        .ok_or(Error::InvalidInput("zero axis".into()))?;
    let mut k = 0;
    for i in 1..3 {
        if a[i].abs() < a[k].abs() {
            k = i;
        }
    }
    let helper = Vec3::unit(k);
    let e1 = (helper - a.scale(helper.dot(&a)))
        .normalized()
        .ok_or(Error::InvalidInput("degenerate axis".into()))?;
    let e2 = a.cross(&e1);
    Ok([e1, e2, a])
}

impl<T: Real> SphereRule<T> {
    /// Integral of `f` over the sphere.
    pub fn integrate<V: QuadValue<T>>(&self, mut f: impl FnMut(&Vec3<T>) -> V) -> V {
        let mut s = V::zero_value();
        for (x, &w) in self.nodes.iter().zip(&self.weights) {
            s = s + f(x) * w;
        }
        s
    }

    /// Fallible integral of `f` over the sphere.
    pub fn try_integrate<V: QuadValue<T>>(
        &self,
        mut f: impl FnMut(&Vec3<T>) -> Result<V>,
    ) -> Result<V> {
        let mut s = V::zero_value();
        for (x, &w) in self.nodes.iter().zip(&self.weights) {
            s = s + f(x)? * w;
        }
        Ok(s)
    }

    /// Same rule rotated so its polar axis points along `pole`.
    pub fn rotated(&self, pole: &Vec3<T>) -> Result<Self> {
        let [e1, e2, e3] = frame_for(pole)?;
        let nodes = self
            .nodes
            .iter()
            .map(|x| e1.scale(x[0]) + e2.scale(x[1]) + e3.scale(x[2]))
            .collect();
        Ok(Self {
            nodes,
            weights: self.weights.clone(),
            degree: self.degree,
        })
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True if the rule has no nodes.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Equispaced trapezoid rule on the great circle orthogonal to `axis`.
///
/// Weights sum to `2π`.
pub fn great_circle_quadrature<T: Real>(axis: &Vec3<T>, n_nodes: usize) -> Result<Vec<(Vec3<T>, T)>> {
    if n_nodes < 8 {
        return Err(Error::InvalidInput(format!(
            "great circle needs at least 8 nodes, got {n_nodes}"
        )));
    }
    let [e1, e2, _] = frame_for(axis)?;
    let w = T::c(2.0 * std::f64::consts::PI / n_nodes as f64);
    Ok((0..n_nodes)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n_nodes as f64;
            (e1.scale(T::c(t.cos())) + e2.scale(T::c(t.sin())), w)
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Radial integrals
// ---------------------------------------------------------------------------

/// Geometric radial panels (ratio 2) with a Gauss rule per panel.
#[derive(Clone, Debug)]
pub struct RadialRule<T> {
    /// Panel breakpoints from `r_min` to `r_tail`.
    pub breakpoints: Vec<T>,
    /// Per-panel Gauss rule.
    pub gauss: GaussRule<T>,
    /// Start of the substituted tail `t = 1/r`.
    pub r_tail: T,
}

impl<T: Real> RadialRule<T> {
    /// Panels `[r_min, 2 r_min, …, r_tail]` with `points` Gauss nodes each.
    pub fn new(r_min: T, r_tail: T, points: usize) -> Self {
        let mut breakpoints = vec![r_min];
        let mut r = r_min;
        while r * T::c(2.0) < r_tail * T::c(1.0 - 1e-12) {
            r = r * T::c(2.0);
            breakpoints.push(r);
        }
        breakpoints.push(r_tail);
        Self {
            breakpoints,
            gauss: GaussRule::new(points),
            r_tail,
        }
    }

    /// `∫_{r_min}^{r_tail} f(r) dr` panel by panel.
    pub fn integrate_panels<V: QuadValue<T>>(&self, f: &mut impl FnMut(T) -> V) -> Vec<V> {
        self.breakpoints
            .windows(2)
            .map(|w| self.gauss.integrate(w[0], w[1], f))
            .collect()
    }

    /// `∫_{r_tail}^∞ f(r) dr` via `t = 1/r`; requires `f = O(r⁻²)`.
    pub fn integrate_tail<V: QuadValue<T>>(&self, f: &mut impl FnMut(T) -> V) -> V {
        let b = T::one() / self.r_tail;
        self.gauss
            .integrate(T::zero(), b, &mut |t: T| f(T::one() / t) * (T::one() / (t * t)))
    }
}

/// Log-regularized ray integral with split point 1.
///
/// Returns `lim_{ε→0}[∫_ε^∞ g(r)/r dr + g(0) ln ε]`. The truncated piece
/// below `epsilon` is restored from `g(ε/2)`, so the result is insensitive
/// to `epsilon`. `g` must be evaluable at `r = 0` and decay like `1/r`.
pub fn radial_log_integral<T: Real, V: QuadValue<T>>(
    g: impl FnMut(T) -> V,
    epsilon: T,
) -> Result<V> {
    radial_log_integral_split(g, epsilon, T::one())
}

/// [`radial_log_integral`] with an explicit split point `s`:
/// `∫_0^s (g − g₀)/r dr + ∫_s^∞ g/r dr + g₀ ln s`.
pub fn radial_log_integral_split<T: Real, V: QuadValue<T>>(
    mut g: impl FnMut(T) -> V,
    epsilon: T,
    split: T,
) -> Result<V> {
    if !(epsilon > T::zero() && epsilon < split) {
        return Err(Error::InvalidInput(format!(
            "need 0 < epsilon < split, got epsilon = {}, split = {}",
            epsilon.f(),
            split.f()
        )));
    }
    let rule = GaussRule::<T>::new(12);
    let g0 = g(T::zero());
    let scale = g0
        .magnitude()
        .max(g(split).magnitude())
        .max(T::min_positive_value());
    let tol = T::c(1e-13) * scale;

    // Inner panels on [ε, s], halving toward ε.
    let mut inner = V::zero_value();
    let mut hi = split;
    while hi > epsilon {
        let lo = (hi * T::c(0.5)).max(epsilon);
        inner = inner + rule.adaptive(lo, hi, tol, &mut |r: T| (g(r) - g0) * (T::one() / r))?;
        hi = lo;
    }
    // Restores ∫_0^ε (g − g₀)/r dr to third order in ε.
    let below = (g(epsilon * T::c(0.5)) - g0) * T::c(2.0);

    // Outer panels on [s, R_tail].
    let r_tail = T::c(DEFAULT_R_TAIL).max(split * T::c(4.0));
    let mut outer = V::zero_value();
    let mut contribs: Vec<T> = Vec::new();
    let mut lo = split;
    while lo < r_tail {
        let hi = (lo * T::c(2.0)).min(r_tail);
        let p = rule.adaptive(lo, hi, tol, &mut |r: T| g(r) * (T::one() / r))?;
        contribs.push(p.magnitude());
        outer = outer + p;
        lo = hi;
    }
    if contribs.len() >= 2 {
        let last = contribs[contribs.len() - 1];
        let prev = contribs[contribs.len() - 2];
        if last > T::c(0.9) * prev && last > T::c(1e-8) * scale {
            return Err(Error::Quadrature(format!(
                "non-decaying tail: last panel contributions {:.3e}, {:.3e}",
                prev.f(),
                last.f()
            )));
        }
    }
    // Tail via t = 1/r: ∫_R^∞ g(r)/r dr = ∫_0^{1/R} g(1/t)/t dt.
    let tail = rule.adaptive(T::zero(), T::one() / r_tail, tol, &mut |t: T| {
        g(T::one() / t) * (T::one() / t)
    })?;

    Ok(inner + below + outer + tail + g0 * split.ln())
}

// ---------------------------------------------------------------------------
// Exterior volume
// ---------------------------------------------------------------------------

/// Result of [`exterior_volume_quadrature`].
#[derive(Clone, Copy, Debug)]
pub struct VolumeIntegral<V, T> {
    /// Integral over `|x| ≥ 1`.
    pub value: V,
    /// Contribution of `|x| > R_tail`.
    pub tail: V,
    /// Size of the tail contribution.
    pub tail_bound: T,
    /// Set when `|f|·r⁴` grows at large radius.
    pub decay_warning: bool,
}

/// `∫_{|x| ≥ 1} f dx` by a radial-panel × sphere product rule on
/// `[1, R_tail]` and a substituted tail `t = 1/r` beyond it.
///
/// The rule is linear in `f`.
pub fn exterior_volume_quadrature<T: Real, V: QuadValue<T>>(
    mut f: impl FnMut(&Vec3<T>) -> Result<V>,
    r_tail: T,
    sphere_degree: usize,
) -> Result<VolumeIntegral<V, T>> {
    if r_tail < T::c(16.0) {
        return Err(Error::InvalidInput(format!(
            "R_tail must be at least 16, got {}",
            r_tail.f()
        )));
    }
    let sphere = sphere_quadrature::<T>(sphere_degree)?;
    let radial = RadialRule::new(T::one(), r_tail, 12);
    let mut err: Option<Error> = None;
    let mut shell = |r: T| -> V {
        if err.is_some() {
            return V::zero_value();
        }
        match sphere.try_integrate(|w| f(&w.scale(r))) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                V::zero_value()
            }
        }
    };
    let mut body = V::zero_value();
    for p in radial.integrate_panels(&mut |r: T| shell(r) * (r * r)) {
        body = body + p;
    }
    let near = shell(r_tail).magnitude() * r_tail.powi(4);
    let far_r = r_tail * T::c(64.0);
    let far = shell(far_r).magnitude() * far_r.powi(4);
    let tail = radial.integrate_tail(&mut |r: T| shell(r) * (r * r));
    if let Some(e) = err {
        return Err(e);
    }
    Ok(VolumeIntegral {
        value: body + tail,
        tail,
        tail_bound: tail.magnitude(),
        decay_warning: far > T::c(2.0) * near && far > T::c(1e-300),
    })
}
