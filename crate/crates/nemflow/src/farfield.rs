//! Far-field analysis: Green's-function symbols and their real-space
//! inversion, the log-regularized `H` kernel, the leading `1/|x|` term of
//! the deviation, the boundary-stress vector `J_γ` and the drag fit.

use std::f64::consts::PI;

use crate::aniso::{projected_symbol, symbol_matrix, AnisotropyTensor, GammaSet, assemble_m};
use crate::error::{Error, Result};
use crate::forcing::{div_a_gamma, div_a_leading, div_c_gamma, d_gamma, ForcingContext, VelocitySample};
use crate::quad::{
    exterior_volume_quadrature, great_circle_quadrature, radial_log_integral_split, sphere_quadrature,
    SphereRule, VolumeIntegral,
};
use crate::stokes_iso::{es_tensor, f_tensor, oseen_tensor, uniform_flow};
use crate::tensor_core::{contract_m_d2_mat, Mat3, Real, Vec3};

/// Smallest admissible singular value of `I + (I − ξ̂ξ̂)[M](ξ̂)`.
pub const MIN_SINGULAR: f64 = 1e-3;

/// Threshold on the drag-fit residual.
pub const DRAG_RESIDUAL_TOL: f64 = 0.05;

/// Quadrature settings for the far-field computations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FarfieldRules<T> {
    /// Sphere degree for integrals against `H`.
    pub sphere_degree: usize,
    /// Regularization radius of the ray integrals.
    pub epsilon: T,
    /// Split point of the ray integrals.
    pub split: T,
    /// Great-circle nodes for the anisotropic Green's function.
    pub circle_nodes: usize,
    /// Outer radius of the panelled exterior-volume range.
    pub r_tail: T,
    /// Sphere degree of the exterior-volume rule.
    pub volume_degree: usize,
}

impl<T: Real> Default for FarfieldRules<T> {
    fn default() -> Self {
        Self {
            sphere_degree: 32,
            epsilon: T::c(1e-4),
            split: T::c(0.5),
            circle_nodes: 64,
            r_tail: T::c(64.0),
            volume_degree: 24,
        }
    }
}

// ---------------------------------------------------------------------------
// Symbols and real-space inversion
// ---------------------------------------------------------------------------

/// Fourier symbols of the anisotropic Stokes operator.
#[derive(Clone, Copy, Debug)]
pub struct GreenSymbols<T> {
    /// Anisotropy tensor the symbols derive from.
    pub m: AnisotropyTensor<T>,
}

impl<T: Real> GreenSymbols<T> {
    fn inverse_at(&self, xi: &Vec3<T>) -> Result<Mat3<T>> {
        let k = projected_symbol(&self.m, xi);
        let sigma = k.min_singular_value();
        if sigma < T::c(MIN_SINGULAR) {
            return Err(Error::NearSingular {
                direction: xi.to_f64(),
                sigma: sigma.f(),
            });
        }
        k.inverse().ok_or(Error::Singular("projected symbol"))
    }

    /// Velocity symbol `Ĝ(ξ̂) = (I + (I−ξ̂ξ̂)[M](ξ̂))⁻¹(I − ξ̂ξ̂)`.
    pub fn g_hat(&self, xi_hat: &Vec3<T>) -> Result<Mat3<T>> {
        let proj = Mat3::identity() - xi_hat.outer(xi_hat);
        Ok(self.inverse_at(xi_hat)? * proj)
    }

    /// Pressure symbol `ĥ(ξ̂) = ξ̂ − (I−ξ̂ξ̂)K⁻ᵀ[M](ξ̂)ᵀξ̂`, imaginary unit dropped.
    pub fn h_hat(&self, xi_hat: &Vec3<T>) -> Result<Vec3<T>> {
        let proj = Mat3::identity() - xi_hat.outer(xi_hat);
        let kinv_t = self.inverse_at(xi_hat)?.transpose();
        let mt = symbol_matrix(&self.m, xi_hat).transpose();
        Ok(*xi_hat - (proj * kinv_t).mul_vec(&mt.mul_vec(xi_hat)))
    }
}

/// Checks invertibility on a sphere rule and returns the symbols.
pub fn green_symbols<T: Real>(m: &AnisotropyTensor<T>) -> Result<GreenSymbols<T>> {
    let s = GreenSymbols { m: *m };
    let rule = sphere_quadrature::<T>(32)?;
    for xi in &rule.nodes {
        s.inverse_at(xi)?;
    }
    Ok(s)
}

fn circle_average<T: Real>(s: &GreenSymbols<T>, x_hat: &Vec3<T>, nodes: usize) -> Result<Mat3<T>> {
    let mut acc = Mat3::zero();
    for (w, wt) in great_circle_quadrature(x_hat, nodes)? {
        acc += s.g_hat(&w)?.scale(wt);
    }
    Ok(acc)
}

/// Real-space `G_γ(x) = (1/(8π²|x|)) ∮_{ω ⊥ x̂} Ĝ(ω) dω`.
///
/// Errors if halving the node count changes the result by more than
/// `1e-6` relative.
pub fn green_g_realspace<T: Real>(s: &GreenSymbols<T>, x: &Vec3<T>, circle_nodes: usize) -> Result<Mat3<T>> {
    let r = x.norm();
    let x_hat = x.normalized().ok_or(Error::Singular("Green's function at the origin"))?;
    let full = circle_average(s, &x_hat, circle_nodes)?;
    if circle_nodes >= 16 {
        let half = circle_average(s, &x_hat, circle_nodes / 2)?;
        let diff = (full - half).max_abs();
        if diff > T::c(1e-6) * full.max_abs().max(T::min_positive_value()) {
            return Err(Error::Quadrature(format!(
                "circle quadrature not converged with {circle_nodes} nodes (change {:.3e})",
                diff.f()
            )));
        }
    }
    Ok(full.scale(T::one() / (T::c(8.0 * PI * PI) * r)))
}

// ---------------------------------------------------------------------------
// H kernel
// ---------------------------------------------------------------------------

/// Green's function inside the `H` kernel.
#[derive(Clone, Copy, Debug)]
pub enum Kernel<'a, T> {
    /// Identically zero.
    Zero,
    /// Oseen tensor `E`.
    Isotropic,
    /// Anisotropic `G_γ` by circle quadrature.
    Anisotropic {
        /// Symbols to invert.
        symbols: &'a GreenSymbols<T>,
        /// Great-circle nodes.
        circle_nodes: usize,
    },
}

impl<T: Real> Kernel<'_, T> {
    /// Green's function at `x ≠ 0`.
    pub fn eval(&self, x: &Vec3<T>) -> Result<Mat3<T>> {
        match self {
            Kernel::Zero => Ok(Mat3::zero()),
            Kernel::Isotropic => Ok(oseen_tensor(x)?.pair.e),
            Kernel::Anisotropic { symbols, circle_nodes } => green_g_realspace(symbols, x, *circle_nodes),
        }
    }
}

/// `H(x̂, ω) = lim_ε[∫_ε^∞ G(x̂ − rω)/r dr + G(x̂) ln ε]` with split `½`.
pub fn h_kernel<T: Real>(kernel: &Kernel<'_, T>, x_hat: &Vec3<T>, omega: &Vec3<T>, epsilon: T) -> Result<Mat3<T>> {
    h_kernel_split(kernel, x_hat, omega, epsilon, T::c(0.5))
}

/// [`h_kernel`] with an explicit split point.
pub fn h_kernel_split<T: Real>(
    kernel: &Kernel<'_, T>,
    x_hat: &Vec3<T>,
    omega: &Vec3<T>,
    epsilon: T,
    split: T,
) -> Result<Mat3<T>> {
    if !(epsilon >= T::c(1e-5) && epsilon <= T::c(1e-2)) {
        return Err(Error::InvalidInput(format!(
            "epsilon must lie in [1e-5, 1e-2], got {}",
            epsilon.f()
        )));
    }
    if (*x_hat - *omega).norm() < T::c(1e-12) {
        return Err(Error::Singular("H kernel with omega equal to x_hat"));
    }
    if let Kernel::Zero = kernel {
        return Ok(Mat3::zero());
    }
    let mut err = None;
    let v = radial_log_integral_split(
        |r: T| match kernel.eval(&(*x_hat - omega.scale(r))) {
            Ok(g) => g,
            Err(e) => {
                err.get_or_insert(e);
                Mat3::zero()
            }
        },
        epsilon,
        split,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Coefficient of `1/|x|` in `∫ G(x−y) F(ŷ)/|y|³ dy` for mean-zero `F`:
/// `(1/|x|) ∫_{𝕊²} H(x̂, ω) F(ω) dσ`.
pub fn bulk_leading<T: Real>(
    mut f: impl FnMut(&Vec3<T>) -> Result<Vec3<T>>,
    x: &Vec3<T>,
    kernel: &Kernel<'_, T>,
    rules: &FarfieldRules<T>,
) -> Result<Vec3<T>> {
    let rule = sphere_quadrature::<T>(rules.sphere_degree)?;
    let mut size = T::zero();
    let mean = rule.try_integrate(|w| {
        let v = f(w)?;
        size = size.max(v.max_abs());
        Ok(v)
    })?;
    if mean.max_abs() > T::c(1e-10) * size.max(T::one()) {
        return Err(Error::LogTerm { mean: mean.max_abs().f() });
    }
    let r = x.norm();
    let x_hat = x.normalized().ok_or(Error::Singular("bulk coefficient at the origin"))?;
    let polar = rule.rotated(&x_hat)?;
    let acc = polar.try_integrate(|w| Ok(h_kernel_split(kernel, &x_hat, w, rules.epsilon, rules.split)?.mul_vec(&f(w)?)))?;
    Ok(acc.scale(T::one() / r))
}

// ---------------------------------------------------------------------------
// Closed-form M:D²E and M:D²F
// ---------------------------------------------------------------------------

/// Which isotropic tensor is differentiated in [`md2_closed`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Md2Kind {
    /// Oseen tensor.
    E,
    /// Dipole tensor.
    F,
}

/// Closed form of `M_γ:D²E` or `M_γ:D²F` on the basis
/// `{I, n⊗n, x̂⊗x̂, n⊗x̂, x̂⊗n}`.
pub fn md2_closed<T: Real>(kind: Md2Kind, gamma: &GammaSet<T>, s_star: T, n_star: &Vec3<T>, x: &Vec3<T>) -> Result<Mat3<T>> {
    let r = x.norm();
    let u = x.normalized().ok_or(Error::Singular("closed form at the origin"))?;
    let n = n_star.normalized().ok_or(Error::InvalidInput("n_star must be nonzero".into()))?;
    let co = assemble_m(gamma, s_star, &n).basis_coeffs();
    let c = n.dot(&u);
    let c2 = c * c;
    let k = T::c;
    let i = Mat3::identity();
    let nn = n.outer(&n);
    let uu = u.outer(&u);
    let nu = n.outer(&u);
    let un = u.outer(&n);
    let terms: [Mat3<T>; 5] = match kind {
        Md2Kind::E => [
            i.scale(k(2.0)) - uu.scale(k(6.0)),
            nn.scale(k(2.0)) - nu.scale(k(6.0) * c),
            i.scale(k(3.0) * c2 - T::one()) + nn.scale(k(2.0)) - (nu + un).scale(k(6.0) * c)
                + uu.scale(k(15.0) * c2 - k(3.0)),
            i.scale(T::one() - k(3.0) * c2) - nu.scale(k(6.0) * c) + uu.scale(k(15.0) * c2 - k(3.0)),
            nn.scale(T::one() - k(3.0) * c2) + nu.scale(k(15.0) * c2 * c - k(9.0) * c),
        ],
        Md2Kind::F => {
            let b3 = i.scale(k(3.0) - k(15.0) * c2) + nn.scale(k(6.0)) - (nu + un).scale(k(30.0) * c)
                + uu.scale(k(105.0) * c2 - k(15.0));
            [
                Mat3::zero(),
                Mat3::zero(),
                b3,
                b3,
                nn.scale(k(9.0) - k(45.0) * c2) + nu.scale(k(105.0) * c2 * c - k(45.0) * c),
            ]
        }
    };
    let scale = match kind {
        Md2Kind::E => T::one() / (k(8.0 * PI) * r * r * r),
        Md2Kind::F => T::one() / (r * r * r * r * r),
    };
    let mut out = Mat3::zero();
    for b in 0..5 {
        out += terms[b].scale(co[b]);
    }
    Ok(out.scale(scale))
}

/// `M_γ:D²E` at `x` by direct contraction.
pub fn md2_e<T: Real>(m: &AnisotropyTensor<T>, x: &Vec3<T>) -> Result<Mat3<T>> {
    Ok(contract_m_d2_mat(&m.m, &oseen_tensor(x)?.d2e))
}

/// `M_γ:D²F` at `x` by direct contraction.
pub fn md2_f<T: Real>(m: &AnisotropyTensor<T>, x: &Vec3<T>) -> Result<Mat3<T>> {
    Ok(contract_m_d2_mat(&m.m, &f_tensor(x)?.d2))
}

// ---------------------------------------------------------------------------
// Leading deviation, boundary stress and drag
// ---------------------------------------------------------------------------

/// Amplitude of the `r⁻³` part of the first-order right-hand side
/// `M_γ:D²v₀ + f_γ(v₀)` at a unit direction.
pub fn leading_source<T: Real>(ctx: &ForcingContext<T>, a: T, w: &Vec3<T>) -> Result<Vec3<T>> {
    let me = md2_e(&ctx.m, w)?.mul_vec(&ctx.v_star);
    Ok(div_a_leading(w, ctx) - me.scale(T::c(6.0 * PI) * a))
}

/// Uniform flow `E_S v*` as a velocity sample.
fn base_flow<T: Real>(y: &Vec3<T>, a: T, v_star: &Vec3<T>) -> Result<VelocitySample<T>> {
    Ok(uniform_flow(y, a, v_star)?.into())
}

/// Remainder of the first-order right-hand side after its `r⁻³` part.
pub fn source_remainder<T: Real>(ctx: &ForcingContext<T>, a: T, y: &Vec3<T>) -> Result<Vec3<T>> {
    let r = y.norm();
    let y_hat = y.scale(T::one() / r);
    let u = base_flow(y, a, &ctx.v_star)?;
    let mf = md2_f(&ctx.m, y)?.mul_vec(&ctx.v_star).scale(a * a * a * T::c(0.25));
    let div_a = div_a_gamma(y, ctx)? - div_a_leading(&y_hat, ctx).scale(T::one() / (r * r * r));
    Ok(mf + div_a + div_c_gamma(&u, y, ctx)? + d_gamma(&u, y, ctx)?)
}

/// Full first-order right-hand side `M_γ:D²v₀ + f_γ(v₀)` at `y`.
pub fn first_order_source<T: Real>(ctx: &ForcingContext<T>, a: T, y: &Vec3<T>) -> Result<Vec3<T>> {
    let r = y.norm();
    let lead = leading_source(ctx, a, &y.scale(T::one() / r))?.scale(T::one() / (r * r * r));
    Ok(lead + source_remainder(ctx, a, y)?)
}

/// Leading `1/|x|` part `I_γ(x)` of the first-order deviation.
///
/// The `r⁻³` source goes through the isotropic `H` kernel; the faster
/// decaying remainder enters through its zeroth moment times `E(x)`.
pub fn i_gamma_leading<T: Real>(ctx: &ForcingContext<T>, a: T, x: &Vec3<T>, rules: &FarfieldRules<T>) -> Result<Vec3<T>> {
    let bulk = bulk_leading(|w| leading_source(ctx, a, w), x, &Kernel::Isotropic, rules)?;
    let moment = exterior_volume_quadrature(|y| source_remainder(ctx, a, y), rules.r_tail, rules.volume_degree)?;
    Ok(bulk + oseen_tensor(x)?.pair.e.mul_vec(&moment.value))
}

/// Boundary-stress vector `J_γ = ∫_Ω (E_S − I)[M_γ:D²v₀ + f_γ(v₀)] dy`.
pub fn j_gamma_drag<T: Real>(ctx: &ForcingContext<T>, a: T, rules: &FarfieldRules<T>) -> Result<VolumeIntegral<Vec3<T>, T>> {
    exterior_volume_quadrature(
        |y| {
            let es = es_tensor(y, a)?.m - Mat3::identity();
            Ok(es.mul_vec(&first_order_source(ctx, a, y)?))
        },
        rules.r_tail,
        rules.volume_degree,
    )
}

/// First-order drag `6πa v* + ∫_{|x|=a} B_γ(∇v₀)ν dσ − J_γ`.
pub fn drag_estimate<T: Real>(ctx: &ForcingContext<T>, a: T, j: &Vec3<T>, rule: &SphereRule<T>) -> Result<Vec3<T>> {
    let a2 = a * a;
    let surface = rule.try_integrate(|n| {
        let fl = uniform_flow(&n.scale(a), a, &ctx.v_star)?;
        let b = crate::aniso::t_gamma_stress_unchecked(&fl.grad, fl.p, &ctx.m);
        Ok(b.mul_vec(n).scale(a2))
    })?;
    Ok(surface - *j)
}

/// Fits `F(v*) = [γ∥ e₃⊗e₃ + γ⊥(I − e₃⊗e₃)]v*` to the drags for
/// `v* = e₁, e₂, e₃` computed with `n* = e₃`.
///
/// Returns `(γ∥, γ⊥, residual)`.
pub fn drag_decompose<T: Real>(drags: &[Vec3<T>; 3]) -> Result<(T, T, T)> {
    let f = Mat3::from_cols(*drags);
    let par = f.0[2][2];
    let perp = (f.0[0][0] + f.0[1][1]) * T::c(0.5);
    let mut fit = Mat3::identity().scale(perp);
    fit.0[2][2] = par;
    let norm = fit.norm();
    if !(norm > T::zero()) {
        return Err(Error::InvalidInput("zero drag".into()));
    }
    let residual = (f - fit).norm() / norm;
    if residual > T::c(DRAG_RESIDUAL_TOL) {
        return Err(Error::SymmetryViolated { residual: residual.f() });
    }
    Ok((par, perp, residual))
}

/// Leading far-field amplitude at one direction.
#[derive(Clone, Copy, Debug)]
pub struct FarfieldSample<T> {
    /// Unit direction.
    pub x_hat: Vec3<T>,
    /// `|x|(v − v*)` as `|x| → ∞`.
    pub amplitude: Vec3<T>,
    /// Anisotropic part of the amplitude.
    pub deviation: Vec3<T>,
}

/// Far-field summary of one configuration.
#[derive(Clone, Debug)]
pub struct FarfieldReport<T> {
    /// Sampled leading amplitudes.
    pub samples: Vec<FarfieldSample<T>>,
    /// Boundary-stress vector.
    pub j_gamma: Vec3<T>,
    /// First-order drag for the configured `v*`.
    pub drag: Vec3<T>,
    /// Drag coefficient along `n*`.
    pub gamma_par: T,
    /// Drag coefficient across `n*`.
    pub gamma_perp: T,
    /// Residual of the drag fit.
    pub fit_residual: T,
    /// Tail contribution of the `J_γ` volume integral.
    pub j_tail_bound: T,
    /// Set when the `J_γ` integrand decays too slowly.
    pub decay_warning: bool,
}

/// Builds the far-field report for `ctx` at particle radius `a`.
pub fn farfield_report<T: Real>(
    ctx: &ForcingContext<T>,
    a: T,
    directions: &[Vec3<T>],
    rules: &FarfieldRules<T>,
) -> Result<FarfieldReport<T>> {
    let surf = sphere_quadrature::<T>(16)?;
    let j = j_gamma_drag(ctx, a, rules)?;
    let mut samples = Vec::with_capacity(directions.len());
    for d in directions {
        let x_hat = d.normalized().ok_or(Error::InvalidInput("zero direction".into()))?;
        let e = oseen_tensor(&x_hat)?.pair.e;
        let dev = i_gamma_leading(ctx, a, &x_hat, rules)? + e.mul_vec(&j.value);
        let iso = e.mul_vec(&ctx.v_star).scale(-T::c(6.0 * PI) * a);
        samples.push(FarfieldSample {
            x_hat,
            amplitude: iso + dev,
            deviation: dev,
        });
    }
    let drag = drag_estimate(ctx, a, &j.value, &surf)?;

    // Drag coefficients in the frame n* = e₃.
    let aligned = ForcingContext::new(
        crate::nematic::NematicParams::new(ctx.params.w, ctx.params.s_star, Vec3::unit(2))?,
        ctx.gamma,
        Vec3::unit(0),
    )
    .frozen(ctx.frozen_q);
    let mut drags = [Vec3::zero(); 3];
    for (k, slot) in drags.iter_mut().enumerate() {
        let c = aligned.with_v_star(Vec3::unit(k));
        let jk = j_gamma_drag(&c, a, rules)?;
        *slot = drag_estimate(&c, a, &jk.value, &surf)?;
    }
    let (gamma_par, gamma_perp, fit_residual) = drag_decompose(&drags)?;
    Ok(FarfieldReport {
        samples,
        j_gamma: j.value,
        drag,
        gamma_par,
        gamma_perp,
        fit_residual,
        j_tail_bound: j.tail_bound,
        decay_warning: j.decay_warning,
    })
}

// ---------------------------------------------------------------------------
// Tabulated far-field model
// ---------------------------------------------------------------------------

/// `I_γ(x) + E(x)·J_γ` with the angular factor of the bulk term fitted
/// once by spherical polynomials, for cheap evaluation at many points.
#[derive(Clone, Debug)]
pub struct DeviationModel<T> {
    /// Exponents of the monomial basis.
    exponents: Vec<[usize; 3]>,
    /// Fitted coefficients.
    coeffs: Vec<Vec3<T>>,
    /// Vector multiplying `E(x)`: remainder moment plus `J_γ`.
    pub point_force: Vec3<T>,
    /// Largest fit misfit at the fitting nodes, relative to the amplitude.
    pub fit_residual: T,
}

fn monomial<T: Real>(x: &Vec3<T>, e: &[usize; 3]) -> T {
    let mut v = T::one();
    for (a, &k) in e.iter().enumerate() {
        for _ in 0..k {
            v = v * x[a];
        }
    }
    v
}

/// Solves `A x = b` for several right-hand sides by Gaussian elimination.
fn dense_solve<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<Vec3<T>>) -> Result<Vec<Vec3<T>>> {
    let n = b.len();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or(k);
        if !(a[piv][k].abs() > T::zero()) {
            return Err(Error::Singular("far-field fit"));
        }
        a.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let t = a[k][j];
                a[i][j] = a[i][j] - f * t;
            }
            let t = b[k];
            b[i] = b[i] - t.scale(f);
        }
    }
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s = s - b[j].scale(a[k][j]);
        }
        b[k] = s.scale(T::one() / a[k][k]);
    }
    Ok(b)
}

impl<T: Real> DeviationModel<T> {
    /// Fits the bulk angular factor with spherical polynomials of degree
    /// `degree` on the nodes of a rule exact to twice that degree.
    pub fn new(ctx: &ForcingContext<T>, a: T, j_gamma: &Vec3<T>, rules: &FarfieldRules<T>, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidInput("fit degree must be positive".into()));
        }
        let mut exponents = Vec::new();
        for total in [degree - 1, degree] {
            for i in 0..=total {
                for j in 0..=total - i {
                    exponents.push([i, j, total - i - j]);
                }
            }
        }
        let rule = sphere_quadrature::<T>(2 * degree)?;
        let samples = rule
            .nodes
            .iter()
            .map(|w| bulk_leading(|u| leading_source(ctx, a, u), w, &Kernel::Isotropic, rules))
            .collect::<Result<Vec<_>>>()?;
        let nb = exponents.len();
        let basis: Vec<Vec<T>> = rule.nodes.iter().map(|w| exponents.iter().map(|e| monomial(w, e)).collect()).collect();
        let mut gram = vec![vec![T::zero(); nb]; nb];
        let mut rhs = vec![Vec3::zero(); nb];
        for ((row, s), &wt) in basis.iter().zip(&samples).zip(&rule.weights) {
            for p in 0..nb {
                rhs[p] = rhs[p] + s.scale(wt * row[p]);
                for q in 0..nb {
                    gram[p][q] = gram[p][q] + wt * row[p] * row[q];
                }
            }
        }
        let coeffs = dense_solve(gram, rhs)?;
        let mut misfit = T::zero();
        let mut size = T::zero();
        for (row, s) in basis.iter().zip(&samples) {
            let fit = row.iter().zip(&coeffs).fold(Vec3::zero(), |acc, (&b, c)| acc + c.scale(b));
            misfit = misfit.max((fit - *s).max_abs());
            size = size.max(s.max_abs());
        }
        let moment = exterior_volume_quadrature(|y| source_remainder(ctx, a, y), rules.r_tail, rules.volume_degree)?;
        Ok(Self {
            exponents,
            coeffs,
            point_force: moment.value + *j_gamma,
            fit_residual: if size > T::zero() { misfit / size } else { T::zero() },
        })
    }

    /// Model value at `x ≠ 0`.
    pub fn eval(&self, x: &Vec3<T>) -> Result<Vec3<T>> {
        let r = x.norm();
        let x_hat = x.normalized().ok_or(Error::Singular("far-field model at the origin"))?;
        let bulk = self
            .exponents
            .iter()
            .zip(&self.coeffs)
            .fold(Vec3::zero(), |acc, (e, c)| acc + c.scale(monomial(&x_hat, e)));
        Ok(bulk.scale(T::one() / r) + oseen_tensor(x)?.pair.e.mul_vec(&self.point_force))
    }
}
