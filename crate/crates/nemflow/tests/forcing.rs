mod common;

use std::f64::consts::PI;

use common::*;
use nemflow::aniso::{b_gamma_core, strain_vorticity, viscous_stress_tsv, GammaSet};
use nemflow::forcing::*;
use nemflow::nematic::{q_field, NematicParams};
use nemflow::quad::sphere_quadrature;
use nemflow::stokes_iso::uniform_flow;
use nemflow::tensor_core::QTensor;
use nemflow::{Error, Mat3d, Vec3d};
use rand::Rng;

fn ctx(r: &mut impl Rng, scale: f64) -> ForcingContext<f64> {
    let params = NematicParams::new(r.gen_range(0.5..3.0), r.gen_range(0.2..0.8), rand_unit(r)).unwrap();
    ForcingContext::new(params, rand_gamma(r, scale), rand_vec(r))
}

fn es(x: &Vec3d, c: &ForcingContext<f64>) -> VelocitySample<f64> {
    uniform_flow(x, 1.0, &c.v_star).unwrap().into()
}

#[test]
fn a_gamma_vanishes_without_v_star() {
    let mut r = rng(20);
    let c = ctx(&mut r, 0.5).with_v_star(Vec3d::zero());
    let a = a_gamma(&rand_point(&mut r, 1.0, 5.0), &c).unwrap();
    assert_eq!(a.max_abs(), 0.0);
}

#[test]
fn a_gamma_vanishes_for_stress_only_ratios() {
    let mut r = rng(21);
    let mut c = ctx(&mut r, 0.5);
    let g = [4usize, 5, 6, 7, 10, 11]
        .iter()
        .fold(GammaSet::zero(), |g, &p| g.with(p, r.gen_range(-1.0..1.0)).unwrap());
    c = c.with_gamma(g);
    let a = a_gamma(&rand_point(&mut r, 1.0, 5.0), &c).unwrap();
    assert_eq!(a.max_abs(), 0.0);
}

#[test]
fn a_gamma_domain_error() {
    let mut r = rng(22);
    let c = ctx(&mut r, 0.5);
    assert!(matches!(a_gamma(&Vec3d::new(0.1, 0.2, 0.3), &c), Err(Error::Domain { .. })));
    assert!(matches!(c_gamma(&VelocitySample::constant(c.v_star), &Vec3d::new(0.1, 0.0, 0.0), &c), Err(Error::Domain { .. })));
}

#[test]
fn a_gamma_decays_like_inverse_square() {
    let mut r = rng(23);
    let c = ctx(&mut r, 0.5);
    let dir = rand_unit(&mut r);
    let vals: Vec<f64> = [2.0, 5.0, 10.0, 30.0, 100.0]
        .iter()
        .map(|&rad| a_gamma(&dir.scale(rad), &c).unwrap().norm() * rad * rad)
        .collect();
    let hi = vals.iter().cloned().fold(0.0, f64::max);
    assert!(hi.is_finite() && vals[4] <= 2.0 * vals[0].max(vals[4]));
    // r²|A| tends to a finite nonzero limit.
    assert!((vals[4] - vals[3]).abs() <= 0.05 * vals[4]);
}

#[test]
fn div_a_matches_central_differences() {
    let mut r = rng(24);
    let h = 1e-4;
    for _ in 0..20 {
        let c = ctx(&mut r, 0.5);
        let x = rand_point(&mut r, 1.2, 6.0);
        let mut fd = Vec3d::zero();
        for j in 0..3 {
            let e = Vec3d::unit(j).scale(h);
            fd += (a_gamma(&(x + e), &c).unwrap() - a_gamma(&(x - e), &c).unwrap()).col(j).scale(0.5 / h);
        }
        let exact = div_a_gamma(&x, &c).unwrap();
        assert!(rel_vec(&exact, &fd) <= 1e-5, "{exact:?} vs {fd:?}");
    }
}

#[test]
fn div_a_leading_matches_large_radius_limit() {
    let mut r = rng(25);
    let c = ctx(&mut r, 0.5);
    let d = rand_unit(&mut r);
    let rad = 1e4;
    let got = div_a_gamma(&d.scale(rad), &c).unwrap().scale(rad * rad * rad);
    let lead = div_a_leading(&d, &c);
    assert!(rel_vec(&got, &lead) <= 1e-3);
}

#[test]
fn div_a_leading_has_zero_sphere_mean() {
    let mut r = rng(26);
    let rule = sphere_quadrature::<f64>(16).unwrap();
    for _ in 0..5 {
        let c = ctx(&mut r, 1.0);
        let m = sphere_mean(|w| div_a_leading(w, &c), &rule);
        assert!(m.max_abs() <= 1e-12);
    }
}

#[test]
fn div_a_leading_vanishes_for_gamma1_only() {
    let mut r = rng(27);
    let c = ctx(&mut r, 0.5).with_gamma(GammaSet::zero().with(1, 0.7).unwrap());
    assert!(div_a_leading(&rand_unit(&mut r), &c).max_abs() <= 1e-15);
}

#[test]
fn c_gamma_vanishes_for_frozen_q_and_uniform_flow() {
    let mut r = rng(28);
    let c = ctx(&mut r, 1.0).frozen(true);
    let u = VelocitySample::constant(c.v_star);
    let v = c_gamma(&u, &rand_point(&mut r, 1.0, 5.0), &c).unwrap();
    assert!(v.max_abs() <= 1e-15);
}

#[test]
fn c_gamma_recomposes_from_definition() {
    let mut r = rng(29);
    for _ in 0..20 {
        let c = ctx(&mut r, 1.0);
        let x = rand_point(&mut r, 1.0, 6.0);
        let u = VelocitySample {
            v: rand_vec(&mut r),
            grad: rand_traceless(&mut r),
            hess: None,
        };
        let qs = q_field(&x, &c.params).unwrap();
        let (a, w) = strain_vorticity(&u.grad);
        let conv = Mat3d::from_fn(|i, j| (0..3).map(|k| u.v[k] * qs.grad.0[k][i][j]).sum());
        let q = qs.q.mat();
        let qring = QTensor::project(&(conv + q * w - w * q));
        let t = viscous_stress_tsv(&qs.q, &a, &qring, &c.gamma);
        let b = b_gamma_core(&u.grad, &c.q_star.mat(), &c.gamma.all());
        let want = t - a - b - a_gamma(&x, &c).unwrap();
        let got = c_gamma(&u, &x, &c).unwrap();
        assert!((got - want).max_abs() <= 1e-12 * want.max_abs().max(1e-12));
    }
}

#[test]
fn forcing_decay_on_uniform_flow() {
    let mut r = rng(30);
    let c = ctx(&mut r, 0.5);
    let d = rand_unit(&mut r);
    let mut cs = Vec::new();
    let mut ds = Vec::new();
    let mut fs = Vec::new();
    for rad in [2.0, 5.0, 10.0, 30.0, 100.0] {
        let x = d.scale(rad);
        let u = es(&x, &c);
        cs.push(c_gamma(&u, &x, &c).unwrap().norm() * rad.powi(3));
        ds.push(d_gamma(&u, &x, &c).unwrap().norm() * rad.powi(4));
        fs.push(f_gamma(&u, &x, &c).unwrap().norm() * rad.powi(3));
    }
    for v in [&cs, &ds, &fs] {
        let lo = v[2..].iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = v[2..].iter().cloned().fold(0.0, f64::max);
        assert!(hi.is_finite() && hi <= 3.0 * lo.max(1e-12), "{v:?}");
    }
}

#[test]
fn d_gamma_zero_cases() {
    let mut r = rng(31);
    let c = ctx(&mut r, 1.0);
    let x = rand_point(&mut r, 1.0, 4.0);
    let u = es(&x, &c);
    assert_eq!(d_gamma(&u, &x, &c.with_gamma(GammaSet::zero())).unwrap().max_abs(), 0.0);
    assert_eq!(d_gamma(&u, &x, &c.frozen(true)).unwrap().max_abs(), 0.0);
}

#[test]
fn f_gamma_zero_at_zero_gamma() {
    let mut r = rng(32);
    let c = ctx(&mut r, 1.0).with_gamma(GammaSet::zero());
    let x = rand_point(&mut r, 1.0, 4.0);
    assert!(f_gamma(&es(&x, &c), &x, &c).unwrap().max_abs() <= 1e-15);
}

#[test]
fn f_gamma_is_linear_in_the_velocity() {
    let mut r = rng(33);
    for _ in 0..10 {
        let c = ctx(&mut r, 1.0);
        let x = rand_point(&mut r, 1.0, 4.0);
        let f1 = CurlField::random(&mut r, 2);
        let f2 = CurlField::random(&mut r, 3);
        let s = |f: &CurlField| VelocitySample {
            v: f.value(&x),
            grad: f.grad(&x),
            hess: Some(f.hess(&x)),
        };
        let (u1, u2) = (s(&f1), s(&f2));
        let lhs = f_gamma(&u1, &x, &c).unwrap() - f_gamma(&u2, &x, &c).unwrap();
        let rhs = f_gamma(&u1.combine(1.0, &u2, -1.0), &x, &c).unwrap();
        assert!(rel_vec(&lhs, &rhs) <= 1e-10);
    }
}

#[test]
fn f_gamma_scales_with_gamma() {
    let mut r = rng(34);
    for _ in 0..10 {
        let c = ctx(&mut r, 0.5);
        let c2 = c.with_gamma(c.gamma.scaled(2.0));
        let x = rand_point(&mut r, 1.0, 4.0);
        let u = es(&x, &c);
        let f1 = f_gamma(&u, &x, &c).unwrap();
        let f2 = f_gamma(&u, &x, &c2).unwrap();
        assert!((f2 - f1.scale(2.0)).max_abs() <= 1e-13 * f1.max_abs().max(1.0));
    }
}

#[test]
fn f_gamma_needs_second_derivatives() {
    let mut r = rng(35);
    let c = ctx(&mut r, 0.5);
    let x = rand_point(&mut r, 1.0, 4.0);
    let mut u = es(&x, &c);
    u.hess = None;
    match f_gamma(&u, &x, &c) {
        Err(Error::MissingDerivative(what)) => assert!(what.contains("second")),
        other => panic!("expected a missing-derivative error, got {other:?}"),
    }
}

#[test]
fn dual_divergence_matches_fd_fallback() {
    let mut r = rng(36);
    for _ in 0..10 {
        let c = ctx(&mut r, 0.5);
        let x = rand_point(&mut r, 1.3, 5.0);
        let exact = f_gamma(&es(&x, &c), &x, &c).unwrap();
        let fd = f_gamma_fd(
            |y| {
                let mut s = es(y, &c);
                s.hess = None;
                Ok(s)
            },
            &x,
            &c,
            FD_STEP,
        )
        .unwrap();
        assert!(rel_vec(&fd, &exact) <= 1e-6, "{fd:?} vs {exact:?}");
    }
}

#[test]
fn zero_data_gives_zero_forcing() {
    let mut r = rng(37);
    let c = ctx(&mut r, 0.5).with_v_star(Vec3d::zero());
    let x = rand_point(&mut r, 1.0, 4.0);
    let u = VelocitySample::constant(Vec3d::zero());
    assert_eq!(f_gamma(&u, &x, &c).unwrap().max_abs(), 0.0);
}

#[test]
fn sphere_mean_identities() {
    let rule = sphere_quadrature::<f64>(8).unwrap();
    let m = sphere_mean(|w| w.outer(w).scale(3.0), &rule);
    assert!((m - Mat3d::identity().scale(4.0 * PI)).max_abs() <= 1e-12);
    let c = Vec3d::new(1.0, -2.0, 0.5);
    let m = sphere_mean(|_| c, &rule);
    assert!((m - c.scale(4.0 * PI)).max_abs() <= 1e-12);
}
