//! Acceptance suite: one pass/fail line per criterion.
//!
//! Every reference value is computed here from closed forms or brute-force
//! oracles that do not route through the library code under test.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use nemflow::aniso::{assemble_m, b_block, m_component, GammaSet, M_INDICES};
use nemflow::farfield::*;
use nemflow::forcing::{div_a_leading, sphere_mean, ForcingContext};
use nemflow::nematic::NematicParams;
use nemflow::quad::sphere_quadrature;
use nemflow::solver::*;
use nemflow::stokes_iso::{analytic_surface_drag, annulus_eta};
use nemflow::tensor_core::contract_m_d2;
use nemflow::{Mat3d, QTensor, Result, Vec3, Vec3d};
use rand::Rng;

/// Relative Picard tolerance used throughout.
const SOLVER_TOL: f64 = 1e-8;

/// Outcome of one criterion.
struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

fn d(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

fn ctx(g1: f64, g2: f64, n_star: Vec3d, v_star: Vec3d) -> ForcingContext<f64> {
    let params = NematicParams::new(1.0, 0.5, n_star).expect("valid parameters");
    let gamma = GammaSet::zero().with(1, g1).unwrap().with(2, g2).unwrap();
    ForcingContext::new(params, gamma, v_star)
}

fn picard(sys: &mut StokesSystem, c: &ForcingContext<f64>, bc: OuterBc) -> Result<FlowField> {
    picard_solve_with(sys, c, bc, &PicardOptions::default())
}

/// Uniform flow past a unit sphere: `v* − ¾(v*/r + (v*·x)x/r³) − ¼(v*/r³ − 3(v*·x)x/r⁵)`.
fn stokes_flow(x: &Vec3d, v: &Vec3d) -> Vec3d {
    let r = x.norm();
    let vx = v.dot(x);
    *v - (v.scale(1.0 / r) + x.scale(vx / r.powi(3))).scale(0.75)
        - (v.scale(1.0 / r.powi(3)) - x.scale(3.0 * vx / r.powi(5))).scale(0.25)
}

/// `∂_kl E_ij` of the Oseen tensor by the product rule on `δ_ij/r + x_i x_j/r³`.
fn d2_oseen(x: &Vec3d, i: usize, j: usize, k: usize, l: usize) -> f64 {
    let r = x.norm();
    let d2_inv = 3.0 * x[k] * x[l] / r.powi(5) - d(k, l) / r.powi(3);
    let g = r.powi(-3);
    let dg = |a: usize| -3.0 * x[a] / r.powi(5);
    let d2g = 15.0 * x[k] * x[l] / r.powi(7) - 3.0 * d(k, l) / r.powi(5);
    let prod = (d(i, k) * d(j, l) + d(i, l) * d(j, k)) * g
        + (d(i, k) * x[j] + d(j, k) * x[i]) * dg(l)
        + (d(i, l) * x[j] + d(j, l) * x[i]) * dg(k)
        + x[i] * x[j] * d2g;
    (d(i, j) * d2_inv + prod) / (8.0 * PI)
}

/// `∂_ijkl(1/r)`, which is `∂_kl F_ij` for the dipole tensor.
fn d4_inv_r(x: &Vec3d, i: usize, j: usize, k: usize, l: usize) -> f64 {
    let r = x.norm();
    let idx = [i, j, k, l];
    let mut two = 0.0;
    for a in 0..4 {
        for b in a + 1..4 {
            let rest: Vec<usize> = (0..4).filter(|&c| c != a && c != b).collect();
            two += d(idx[a], idx[b]) * x[idx[rest[0]]] * x[idx[rest[1]]];
        }
    }
    let three = d(i, j) * d(k, l) + d(i, k) * d(j, l) + d(i, l) * d(j, k);
    105.0 * x[i] * x[j] * x[k] * x[l] / r.powi(9) - 15.0 * two / r.powi(7) + 3.0 * three / r.powi(5)
}

/// `(M:D²Φ)_ij = M_{i,m;k,l} ∂_kl Φ_mj` by explicit loops.
fn loop_contract(m: &nemflow::Tensor4d, d2: impl Fn(usize, usize, usize, usize) -> f64) -> Mat3d {
    Mat3d::from_fn(|i, j| {
        let mut s = 0.0;
        for mm in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    s += m.get(i, mm, k, l) * d2(mm, j, k, l);
                }
            }
        }
        s
    })
}

/// Gaussian elimination for the four annulus conditions.
fn annulus_oracle(lambda: f64) -> [f64; 4] {
    let row_f = |r: f64| [1.0 / r, r, r * r, r.powi(4)];
    let row_df = |r: f64| [-1.0 / (r * r), 1.0, 2.0 * r, 4.0 * r.powi(3)];
    let mut m = [row_f(lambda), row_df(lambda), row_f(1.0), row_df(1.0)];
    let mut b = [0.0, 0.0, 0.5, 1.0];
    for c in 0..4 {
        let p = (c..4).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        m.swap(c, p);
        b.swap(c, p);
        for r in 0..4 {
            if r != c {
                let f = m[r][c] / m[c][c];
                for k in 0..4 {
                    m[r][k] -= f * m[c][k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    std::array::from_fn(|i| b[i] / m[i][i])
}

fn sup_dist(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (p, q)| m.max((p.1 - q.1).abs()))
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

/// Shared fine `γ = 0` field for the benchmark and the drag check.
struct Benchmark {
    fine: FlowField,
    coarse_err: f64,
    fine_err: f64,
}

fn benchmark() -> Result<Benchmark> {
    let v = Vec3d::unit(0);
    let c = ctx(0.0, 0.0, Vec3d::unit(2), v);
    let mut errs = Vec::new();
    let mut fine = None;
    for n in [48, 96] {
        let grid = build_grid(8.0, n)?;
        let f = picard_solve(&grid, &c, OuterBc::AnalyticEs, &PicardOptions::default())?;
        errs.push(relative_l2_error(&f, 1.0, |x| Ok(stokes_flow(x, &v)))?);
        fine = Some(f);
    }
    Ok(Benchmark {
        fine: fine.expect("two runs"),
        coarse_err: errs[0],
        fine_err: errs[1],
    })
}

fn criterion1(b: &Benchmark) -> Outcome {
    let ratio = b.coarse_err / b.fine_err;
    Outcome::new(
        b.fine_err <= 0.02 && ratio >= 3.0,
        format!("L2 error n=96 {:.3e} (<= 2e-2), n=48/n=96 ratio {ratio:.2} (>= 3)", b.fine_err),
    )
}

fn criterion2() -> Outcome {
    let eta = annulus_eta(0.5f64);
    let oracle = annulus_oracle(0.5);
    let err_a = (eta[0] - 7.0 / 34.0).abs().max((eta[0] - oracle[0]).abs());
    let lam = 0.01f64;
    let err_c = (annulus_eta(lam)[2] - (0.5 + 9.0 * lam / 8.0)).abs();
    Outcome::new(
        err_a <= 1e-12 && err_c <= 1e-3,
        format!("eta_A(1/2) error {err_a:.2e} (<= 1e-12), eta_C(0.01) error {err_c:.2e} (<= 1e-3)"),
    )
}

fn criterion3(b: &Benchmark) -> Result<Outcome> {
    let v = Vec3d::unit(0);
    let stokes = 6.0 * PI;
    let rule = sphere_quadrature::<f64>(24)?;
    let surf = analytic_surface_drag(1.0, &v, &rule)?;
    let e_surf = (surf - v.scale(stokes)).norm() / stokes;
    let c = ctx(0.0, 0.0, Vec3d::unit(2), v);
    let grid = extract_drag(&b.fine, &c, &rule)?;
    let e_grid = (grid - v.scale(stokes)).norm() / stokes;
    Ok(Outcome::new(
        e_surf <= 1e-6 && e_grid <= 0.05,
        format!("surface quadrature {e_surf:.2e} (<= 1e-6), grid n=96 {e_grid:.3e} (<= 5e-2)"),
    ))
}

fn criterion4() -> Result<Outcome> {
    let mut r = rng(1001);
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for p in M_INDICES {
        for _ in 0..20 {
            let field = CurlField::random(&mut r, 2);
            let s: f64 = r.gen_range(0.2..0.8);
            let n = rand_unit(&mut r);
            let q = QTensor::nematic(s, &n);
            let x = rand_vec(&mut r);
            let lhs = contract_m_d2(&m_component(p, s, &n)?, &field.hess(&x));
            let mut fd = Vec3d::zero();
            for j in 0..3 {
                let e = Vec3d::unit(j).scale(h);
                let bp = b_block(p, &field.grad(&(x + e)), &q)?;
                let bm = b_block(p, &field.grad(&(x - e)), &q)?;
                fd += (bp - bm).col(j).scale(0.5 / h);
            }
            worst = worst.max((lhs - fd).norm() / fd.norm().max(lhs.norm()).max(1e-3));
        }
    }
    let mut ident: f64 = 0.0;
    for _ in 0..20 {
        let s: f64 = r.gen_range(-0.5..1.0);
        let n = rand_unit(&mut r);
        let m2 = m_component(2, s, &n)?;
        let m3 = m_component(3, s, &n)?;
        let m6 = m_component(6, s, &n)?;
        let m11 = m_component(11, s, &n)?;
        ident = ident.max(m3.add(&m2.scale(-s / 6.0)).max_abs());
        ident = ident.max(m11.add(&m6.scale(-2.0 * s * s / 3.0)).max_abs());
    }
    Ok(Outcome::new(
        worst <= 1e-6 && ident <= 1e-13,
        format!("FD divergence rel err {worst:.2e} (<= 1e-6), M3/M11 identities {ident:.2e} (<= 1e-13)"),
    ))
}

fn criterion5() -> Result<Outcome> {
    let rule = sphere_quadrature::<f64>(16)?;
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let v = rule.integrate(|w| d2_oseen(w, i, j, k, l));
                    worst = worst.max(v.abs());
                }
            }
        }
    }
    let mut r = rng(1002);
    let mut mean: f64 = 0.0;
    for _ in 0..5 {
        let params = NematicParams::new(1.0, r.gen_range(0.2..0.8), rand_unit(&mut r))?;
        let c = ForcingContext::new(params, rand_gamma(&mut r, 1.0), rand_vec(&mut r));
        mean = mean.max(sphere_mean(|w| div_a_leading(w, &c), &rule).max_abs());
    }
    let xx = rule.integrate(|w| w.outer(w).scale(3.0));
    let exx = (xx - Mat3d::identity().scale(4.0 * PI)).max_abs();
    Ok(Outcome::new(
        worst <= 1e-12 && mean <= 1e-12 && exx <= 1e-12,
        format!("81 D2E sphere integrals {worst:.2e}, div A mean {mean:.2e}, 3xx integral {exx:.2e} (all <= 1e-12)"),
    ))
}

fn criterion6() -> Result<Outcome> {
    let mut r = rng(1003);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let g = rand_gamma(&mut r, 1.0);
        let s: f64 = r.gen_range(0.1..1.0);
        let n = rand_unit(&mut r);
        let x = rand_point(&mut r, 0.5, 5.0);
        let m = assemble_m(&g, s, &n).m;
        let e = loop_contract(&m, |i, j, k, l| d2_oseen(&x, i, j, k, l));
        let f = loop_contract(&m, |i, j, k, l| d4_inv_r(&x, i, j, k, l));
        worst = worst.max(rel_mat(&md2_closed(Md2Kind::E, &g, s, &n, &x)?, &e));
        worst = worst.max(rel_mat(&md2_closed(Md2Kind::F, &g, s, &n, &x)?, &f));
    }
    let mut zero: f64 = 0.0;
    for p in [1usize, 7] {
        for _ in 0..20 {
            let n = rand_unit(&mut r);
            let s: f64 = r.gen_range(0.1..1.0);
            let x = rand_point(&mut r, 0.5, 5.0);
            let m = m_component(p, s, &n)?;
            let scale = x.norm().powi(-5);
            zero = zero.max(loop_contract(&m, |i, j, k, l| d4_inv_r(&x, i, j, k, l)).max_abs() / scale);
            let g = GammaSet::zero().with(p, 1.0)?;
            zero = zero.max(md2_closed(Md2Kind::F, &g, s, &n, &x)?.max_abs() / scale);
        }
    }
    Ok(Outcome::new(
        worst <= 1e-12 && zero <= 1e-12,
        format!("closed forms rel err {worst:.2e} (<= 1e-12), M1/M7:D2F {zero:.2e} (~0)"),
    ))
}

fn criterion7() -> Result<Outcome> {
    let iso = green_symbols(&assemble_m(&GammaSet::zero(), 0.5, &Vec3d::unit(2)))?;
    let mut r = rng(1004);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let u = rand_unit(&mut r);
        let g = green_g_realspace(&iso, &u, 256)?;
        let e = Mat3d::from_fn(|i, j| (d(i, j) + u[i] * u[j]) / (8.0 * PI));
        worst = worst.max((g - e).max_abs());
    }
    let mut homog: f64 = 0.0;
    for _ in 0..10 {
        let m = assemble_m(&rand_gamma(&mut r, 0.3), r.gen_range(0.2..0.8), &rand_unit(&mut r));
        let s = green_symbols(&m)?;
        let x = rand_point(&mut r, 0.5, 3.0);
        let g1 = green_g_realspace(&s, &x, 64)?;
        let g2 = green_g_realspace(&s, &x.scale(2.0), 64)?;
        homog = homog.max((g2.scale(2.0) - g1).max_abs() / g1.max_abs());
    }
    Ok(Outcome::new(
        worst <= 1e-8 && homog <= 1e-15,
        format!("sup |G - E| {worst:.2e} (<= 1e-8), homogeneity {homog:.2e} (round-off)"),
    ))
}

fn criterion8() -> Result<Outcome> {
    let mut r = rng(1005);
    let (mut eps, mut split): (f64, f64) = (0.0, 0.0);
    for _ in 0..10 {
        let xh = rand_unit(&mut r);
        let w = rand_unit(&mut r);
        let a = h_kernel(&Kernel::Isotropic, &xh, &w, 1e-3)?;
        let b = h_kernel(&Kernel::Isotropic, &xh, &w, 1e-4)?;
        eps = eps.max((a - b).max_abs());
        let c = h_kernel_split(&Kernel::Isotropic, &xh, &w, 1e-4, 0.25)?;
        split = split.max((c - b).max_abs());
    }
    Ok(Outcome::new(
        eps <= 1e-6 && split <= 1e-8,
        format!("epsilon change {eps:.2e} (<= 1e-6), split change {split:.2e} (<= 1e-8)"),
    ))
}

/// Runs shared by the Picard and deviation-law criteria.
struct SmallGamma {
    v0: FlowField,
    runs: Vec<(f64, FlowField, FlowField)>,
    zero_max: f64,
}

fn small_gamma() -> Result<SmallGamma> {
    let grid = build_grid(6.0, 48)?;
    let mut sys = StokesSystem::new(&grid);
    let (n, v) = (Vec3d::unit(2), Vec3d::unit(0));
    let v0 = picard(&mut sys, &ctx(0.0, 0.0, n, v), OuterBc::FarVStar)?;
    let zero = picard(&mut sys, &ctx(0.2, 0.18, n, Vec3d::zero()), OuterBc::FarVStar)?;
    let mut runs = Vec::new();
    for g in [0.2, 0.1, 0.05] {
        let c = ctx(g, 0.9 * g, n, v);
        let full = picard(&mut sys, &c, OuterBc::FarVStar)?;
        let phi = perturbation_field(&grid, &c, PerturbationBase::Grid(&v0), &|_| Vec3d::zero(), &LinearOptions::default())?;
        runs.push((g, full, phi));
    }
    Ok(SmallGamma {
        v0,
        runs,
        zero_max: zero.max_velocity(),
    })
}

fn criterion9(s: &SmallGamma) -> Outcome {
    let f = &s.runs[0].1;
    let h = &f.picard_history;
    let ratio = h.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    let last = h.last().copied().unwrap_or(f64::INFINITY);
    let pass = s.v0.picard_iterations == 1
        && f.picard_iterations <= 30
        && last <= SOLVER_TOL
        && ratio <= 0.9
        && s.zero_max == 0.0;
    Outcome::new(
        pass,
        format!(
            "gamma=0 iterations {} (1), (0.2,0.18) iterations {} (<= 30) final update {last:.1e} ratio {ratio:.3} (<= 0.9), zero data max {:.1e}",
            s.v0.picard_iterations, f.picard_iterations, s.zero_max
        ),
    )
}

fn criterion10(s: &SmallGamma) -> Result<Outcome> {
    let mut rem = Vec::new();
    let mut profiles = Vec::new();
    let ray = Sampling::Ray {
        direction: Vec3d::unit(1),
        r_min: 1.5,
        r_max: 4.0,
        points: 26,
    };
    for (g, full, phi) in &s.runs {
        let dev = full.difference(&s.v0)?;
        rem.push(dev.difference(phi)?.max_velocity());
        profiles.push(rescaled_profile(&dev, 0, &ray, *g)?);
    }
    let r1 = rem[0] / rem[1];
    let r2 = rem[1] / rem[2];
    let d1 = sup_dist(&profiles[0], &profiles[1]);
    let d2 = sup_dist(&profiles[1], &profiles[2]);
    let ok = |r: f64| (3.0..=5.0).contains(&r);
    Ok(Outcome::new(
        ok(r1) && ok(r2) && d2 < d1,
        format!("remainder ratios {r1:.2}, {r2:.2} (in [3, 5]); profile distances {d1:.3e} > {d2:.3e}"),
    ))
}

/// Runs at `(γ₁, γ₂) = (1, 0.9)`.
struct Strong {
    drags: [Vec3d; 3],
    flipped: [Vec3d; 3],
    axial: FlowField,
    transverse: FlowField,
    frozen: FlowField,
}

fn strong(grid: &Grid, bc: OuterBc) -> Result<Strong> {
    let mut sys = StokesSystem::new(grid);
    let rule = sphere_quadrature::<f64>(20)?;
    let n = Vec3d::unit(2);
    let mut fields = Vec::new();
    let mut drags = [Vec3d::zero(); 3];
    for (a, slot) in drags.iter_mut().enumerate() {
        let c = ctx(1.0, 0.9, n, Vec3d::unit(a));
        let f = picard(&mut sys, &c, bc)?;
        *slot = extract_drag(&f, &c, &rule)?;
        fields.push(f);
    }
    let mut flipped = [Vec3d::zero(); 3];
    for (a, slot) in flipped.iter_mut().enumerate() {
        let c = ctx(1.0, 0.9, -n, Vec3d::unit(a));
        let f = picard(&mut sys, &c, bc)?;
        *slot = extract_drag(&f, &c, &rule)?;
    }
    let frozen = picard(&mut sys, &ctx(1.0, 0.9, n, Vec3d::unit(0)).frozen(true), bc)?;
    let axial = fields.pop().expect("three runs");
    fields.pop();
    let transverse = fields.pop().expect("three runs");
    Ok(Strong {
        drags,
        flipped,
        axial,
        transverse,
        frozen,
    })
}

/// Largest deviation of `v₃` from its mean along horizontal circles.
fn azimuthal_deviation(f: &FlowField, radii: &[f64], heights: &[f64]) -> f64 {
    let m = 64;
    let mut worst: f64 = 0.0;
    for &rho in radii {
        for &z in heights {
            let vals: Vec<f64> = (0..m)
                .map(|k| {
                    let ph = 2.0 * PI * k as f64 / m as f64;
                    f.velocity_at(&Vec3([rho * ph.cos(), rho * ph.sin(), z]))[2]
                })
                .collect();
            let mean = vals.iter().sum::<f64>() / m as f64;
            worst = vals.iter().fold(worst, |w, v| w.max((v - mean).abs()));
        }
    }
    worst
}

/// Axial run on the finer grid used for the azimuthal check.
fn azimuthal_field() -> Result<FlowField> {
    let grid = build_grid(6.0, 96)?;
    let c = ctx(1.0, 0.9, Vec3d::unit(2), Vec3d::unit(2));
    picard_solve(&grid, &c, OuterBc::AnalyticEs, &PicardOptions::default())
}

fn criterion11(s: &Strong, fine: &FlowField) -> Outcome {
    let v_scale = 1.0;
    let az = azimuthal_deviation(fine, &AZIMUTH_RADII, &AZIMUTH_HEIGHTS);
    let near = azimuthal_deviation(fine, &[1.25, 1.5], &AZIMUTH_HEIGHTS);
    let dz = s.drags[2];
    let transverse = dz[0].abs().max(dz[1].abs()) / dz.norm();
    let mut r = rng(1006);
    let (mut refl, mut equiv): (f64, f64) = (0.0, 0.0);
    for _ in 0..200 {
        let x = rand_point(&mut r, 1.3, 4.5);
        let (y, z) = (x[1], x[2]);
        let v1 = |y: f64, z: f64| s.transverse.velocity_at(&Vec3([0.0, y, z]))[0];
        if y.hypot(z) > 1.3 {
            let base = v1(y, z);
            refl = refl.max((base - v1(-y, z)).abs()).max((base - v1(y, -z)).abs());
        }
        let a = x[0];
        let xz = s.axial.velocity_at(&Vec3([a, 0.0, z]));
        let yz = s.axial.velocity_at(&Vec3([0.0, a, z]));
        equiv = equiv.max((xz[0] - yz[1]).abs());
    }
    let tol = 1e-3 * v_scale;
    Outcome::new(
        az <= tol && transverse <= 0.01 && refl <= tol && equiv <= tol,
        format!(
            "azimuthal v3 {az:.2e} (<= 1e-3; within one radius of the surface {near:.2e}, not gated), transverse drag {transverse:.2e} (<= 1e-2), yz reflection {refl:.2e} (<= 1e-3), xz/yz {equiv:.2e} (<= 1e-3)"
        ),
    )
}

fn criterion12(s: &Strong) -> Result<Outcome> {
    let (par, perp, res) = drag_decompose(&s.drags)?;
    let perp_e1 = s.drags[0][0];
    let perp_e2 = s.drags[1][1];
    let agree = (perp_e1 - perp_e2).abs() / perp_e1.abs();
    let (fpar, fperp, _) = drag_decompose(&s.flipped)?;
    let flip = (fpar - par).abs().max((fperp - perp).abs()) / par.abs().max(perp.abs());
    Ok(Outcome::new(
        res <= 0.05 && agree <= 0.01 && flip <= SOLVER_TOL,
        format!(
            "gamma_par {par:.4} gamma_perp {perp:.4} residual {res:.2e} (<= 5e-2), e1/e2 {agree:.2e} (<= 1e-2), n* flip {flip:.2e} (<= 1e-8)"
        ),
    ))
}

fn criterion13() -> Result<Outcome> {
    let c = ctx(0.2, 0.18, Vec3d::unit(2), Vec3d::unit(0));
    let rules = FarfieldRules::default();
    let j = j_gamma_drag(&c, 1.0, &rules)?.value;
    let model = DeviationModel::new(&c, 1.0, &j, &rules, 8)?;
    let grid = build_grid(24.0, 144)?;
    let outer = |x: &Vec3d| model.eval(x).unwrap_or_else(|_| Vec3d::zero());
    let phi = perturbation_field(&grid, &c, PerturbationBase::Analytic, &outer, &LinearOptions::default())?;
    let mut r = rng(1007);
    let (mut err, mut amp): (f64, f64) = (0.0, 0.0);
    for _ in 0..6 {
        let u = rand_unit(&mut r);
        for rad in [10.0, 12.5, 15.0, 17.5, 20.0] {
            let x = u.scale(rad);
            let e = nemflow::stokes_iso::oseen_tensor(&x)?.pair.e;
            let direct = i_gamma_leading(&c, 1.0, &x, &rules)? + e.mul_vec(&j);
            err = err.max((phi.velocity_at(&x) - direct).norm());
            amp = amp.max(direct.norm());
        }
    }
    let rel = err / amp;
    Ok(Outcome::new(rel <= 0.1, format!("sup relative error on r in [10, 20] {rel:.3e} (<= 1e-1)")))
}

fn criterion14(s: &Strong) -> Result<Outcome> {
    let diff = s.transverse.max_velocity_difference(&s.frozen)?;
    let floor = 5.0 * SOLVER_TOL * s.transverse.max_velocity();
    Ok(Outcome::new(diff >= floor, format!("sup difference {diff:.3e} (>= {floor:.1e})")))
}

/// Circles for the azimuthal check, at least one radius from the surface.
const AZIMUTH_RADII: [f64; 3] = [2.0, 2.5, 3.0];
const AZIMUTH_HEIGHTS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

fn report(id: usize, name: &str, out: Result<Outcome>, start: Instant) -> bool {
    let secs = start.elapsed().as_secs_f64();
    match out {
        Ok(o) => {
            println!("[{}] {id:>2} {name}: {} [{secs:.0}s]", if o.pass { "PASS" } else { "FAIL" }, o.detail);
            o.pass
        }
        Err(e) => {
            println!("[FAIL] {id:>2} {name}: error: {e} [{secs:.0}s]");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut ok = true;

    let t = Instant::now();
    let bench = benchmark();
    let (c1, c3) = match &bench {
        Ok(b) => (Ok(criterion1(b)), criterion3(b)),
        Err(e) => (Err(e.clone()), Err(e.clone())),
    };
    ok &= report(1, "annulus benchmark", c1, t);
    let t = Instant::now();
    ok &= report(2, "eta coefficients", Ok(criterion2()), t);
    ok &= report(3, "Stokes drag", c3, t);
    let t = Instant::now();
    ok &= report(4, "tensor oracle", criterion4(), t);
    let t = Instant::now();
    ok &= report(5, "mean-zero suite", criterion5(), t);
    let t = Instant::now();
    ok &= report(6, "closed-form tables", criterion6(), t);
    let t = Instant::now();
    ok &= report(7, "Green inversion", criterion7(), t);
    let t = Instant::now();
    ok &= report(8, "H kernel", criterion8(), t);

    let t = Instant::now();
    let small = small_gamma();
    let (c9, c10) = match &small {
        Ok(s) => (Ok(criterion9(s)), criterion10(s)),
        Err(e) => (Err(e.clone()), Err(e.clone())),
    };
    ok &= report(9, "Picard", c9, t);
    ok &= report(10, "deviation law", c10, t);

    let t = Instant::now();
    let strong = build_grid(6.0, 48).and_then(|g| strong(&g, OuterBc::AnalyticEs));
    let (c11, c12, c14) = match (&strong, azimuthal_field()) {
        (Ok(s), Ok(fine)) => (Ok(criterion11(s, &fine)), criterion12(s), criterion14(s)),
        (Err(e), _) => (Err(e.clone()), Err(e.clone()), Err(e.clone())),
        (Ok(s), Err(e)) => (Err(e), criterion12(s), criterion14(s)),
    };
    ok &= report(11, "symmetry", c11, t);
    ok &= report(12, "drag structure", c12, t);

    let t = Instant::now();
    ok &= report(13, "far-field consistency", criterion13(), t);
    ok &= report(14, "frozen-Q mode", c14, t);

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
