mod common;

use std::f64::consts::PI;

use common::*;
use nemflow::quad::sphere_quadrature;
use nemflow::stokes_iso::*;
use nemflow::{Error, Mat3d, Vec3d};

#[test]
fn oseen_values() {
    let s = oseen_tensor(&Vec3d::unit(0)).unwrap();
    let want = Mat3d::from_fn(|i, j| if i != j { 0.0 } else if i == 0 { 2.0 } else { 1.0 }).scale(1.0 / (8.0 * PI));
    assert!(rel_mat(&s.pair.e, &want) <= 1e-15);
    assert!((s.pair.e.0[0][0] - 1.0 / (4.0 * PI)).abs() <= 1e-16);
    assert!((s.pair.q - Vec3d::unit(0).scale(-1.0 / (4.0 * PI))).max_abs() <= 1e-16);
    assert!(matches!(oseen_tensor(&Vec3d::zero()), Err(Error::Singular(_))));
    let e2 = oseen_tensor(&Vec3d::unit(1)).unwrap().d2e.0[0][0][0][0];
    assert!(rel(e2, 1.0 / (8.0 * PI)) <= 1e-12);
}

#[test]
fn f_values() {
    let f = f_tensor(&Vec3d::unit(2)).unwrap().m;
    let want = Mat3d::from_fn(|i, j| if i != j { 0.0 } else if i == 2 { 2.0 } else { -1.0 });
    assert_eq!(f, want);
    let mut r = rng(70);
    let x = rand_point(&mut r, 0.5, 4.0);
    assert!(f_tensor(&x).unwrap().m.trace().abs() <= 1e-14);
    assert!(f_tensor(&Vec3d::zero()).is_err());
}

fn check_field_derivatives(field: impl Fn(&Vec3d) -> MatField<f64>) {
    let mut r = rng(71);
    let h = 1e-4;
    for _ in 0..50 {
        let x = rand_point(&mut r, 1.0, 10.0);
        let s = field(&x);
        for k in 0..3 {
            let e = Vec3d::unit(k).scale(h);
            let sp = field(&(x + e));
            let sm = field(&(x - e));
            let d = (sp.m - sm.m).scale(0.5 / h);
            assert!((d - s.d.slice(k)).max_abs() <= 1e-6 * s.d.slice(k).max_abs().max(1e-6 / x.norm().powi(2)));
            for l in 0..3 {
                let d2 = (sp.d.slice(l) - sm.d.slice(l)).scale(0.5 / h);
                let ex = s.d2.slice(k, l);
                assert!((d2 - ex).max_abs() <= 1e-6 * ex.max_abs().max(1e-6 / x.norm().powi(3)));
            }
        }
    }
}

#[test]
fn oseen_derivatives_match_fd() {
    check_field_derivatives(|x| {
        let s = oseen_tensor(x).unwrap();
        MatField { m: s.pair.e, d: s.de, d2: s.d2e }
    });
}

#[test]
fn f_derivatives_match_fd() {
    check_field_derivatives(|x| f_tensor(x).unwrap());
}

#[test]
fn homogeneity() {
    let mut r = rng(72);
    for _ in 0..10 {
        let x = rand_point(&mut r, 0.5, 5.0);
        let (a, b) = (oseen_tensor(&x).unwrap(), oseen_tensor(&x.scale(2.0)).unwrap());
        assert!(rel_mat(&b.pair.e.scale(2.0), &a.pair.e) <= 1e-13);
        assert!(rel_mat(&b.de.slice(0).scale(4.0), &a.de.slice(0)) <= 1e-13);
        assert!(rel_mat(&b.d2e.slice(1, 2).scale(8.0), &a.d2e.slice(1, 2)) <= 1e-13);
        let (fa, fb) = (f_tensor(&x).unwrap(), f_tensor(&x.scale(2.0)).unwrap());
        assert!(rel_mat(&fb.m.scale(8.0), &fa.m) <= 1e-13);
        assert!(rel_mat(&fb.d.slice(2).scale(16.0), &fa.d.slice(2)) <= 1e-13);
        assert!(rel_mat(&fb.d2.slice(0, 0).scale(32.0), &fa.d2.slice(0, 0)) <= 1e-13);
    }
}

#[test]
fn second_derivatives_of_oseen_have_zero_sphere_mean() {
    let rule = sphere_quadrature::<f64>(12).unwrap();
    let mut worst: f64 = 0.0;
    for k in 0..3 {
        for l in 0..3 {
            let m = rule.integrate(|w| oseen_tensor(w).unwrap().d2e.slice(k, l));
            worst = worst.max(m.max_abs());
        }
    }
    assert!(worst <= 1e-12, "{worst}");
}

#[test]
fn uniform_flow_properties() {
    let mut r = rng(73);
    let v = rand_vec(&mut r);
    for _ in 0..20 {
        let n = rand_unit(&mut r);
        let on = uniform_flow(&n.scale(1.3), 1.3, &v).unwrap();
        assert!(on.u.max_abs() <= 1e-14);
        let x = rand_point(&mut r, 1.0, 8.0);
        let f = uniform_flow(&x, 1.0, &v).unwrap();
        assert!(f.grad.trace().abs() <= 1e-12);
        let h = 1e-4;
        for j in 0..3 {
            let e = Vec3d::unit(j).scale(h);
            let d = (uniform_flow(&(x + e), 1.0, &v).unwrap().u - uniform_flow(&(x - e), 1.0, &v).unwrap().u).scale(0.5 / h);
            assert!(rel_vec(&d, &f.grad.col(j)) <= 1e-6 || (d - f.grad.col(j)).max_abs() <= 1e-10);
        }
        // Momentum balance: Δu = ∇p.
        let mut gp = Vec3d::zero();
        for j in 0..3 {
            let e = Vec3d::unit(j).scale(h);
            gp[j] = (uniform_flow(&(x + e), 1.0, &v).unwrap().p - uniform_flow(&(x - e), 1.0, &v).unwrap().p) / (2.0 * h);
        }
        let lap = Vec3d::from_fn(|i| (0..3).map(|k| f.hess.0[i][k][k]).sum());
        assert!((lap - gp).max_abs() <= 1e-6 * gp.max_abs().max(1e-3));
    }
    let far = uniform_flow(&Vec3d::new(1e7, 0.0, 0.0), 1.0, &v).unwrap();
    assert!((far.u - v).max_abs() <= 1e-6);
    assert!(matches!(uniform_flow(&Vec3d::new(0.5, 0.0, 0.0), 1.0, &v), Err(Error::Domain { .. })));
}

#[test]
fn uniform_flow_axis_radial_component() {
    let v = Vec3d::unit(2);
    let f = uniform_flow(&Vec3d::new(0.0, 0.0, 2.0), 2.0, &v).unwrap();
    assert!(f.u.max_abs() <= 1e-15);
}

#[test]
fn stokes_law() {
    let d = stokes_drag(1.0, &Vec3d::unit(0));
    assert!((d[0] - 18.849_555_9).abs() <= 1e-7);
    assert_eq!(stokes_drag(1.0, &Vec3d::zero()), Vec3d::zero());
    let rule = sphere_quadrature::<f64>(16).unwrap();
    for (a, v) in [(1.0, Vec3d::new(0.3, -0.2, 1.0)), (2.5, Vec3d::unit(1))] {
        let got = analytic_surface_drag(a, &v, &rule).unwrap();
        let want = stokes_drag(a, &v);
        assert!(rel_vec(&got, &want) <= 1e-6);
    }
}

/// Solves the four boundary conditions of the annulus stream function.
fn annulus_linear_system(lambda: f64) -> [f64; 4] {
    let (a, rr, v) = (lambda, 1.0, 1.0);
    let row_f = |r: f64| [1.0 / r, r, r * r, r.powi(4)];
    let row_df = |r: f64| [-1.0 / (r * r), 1.0, 2.0 * r, 4.0 * r.powi(3)];
    let mut m = [row_f(a), row_df(a), row_f(rr), row_df(rr)];
    let mut b = [0.0, 0.0, v * rr * rr / 2.0, v * rr];
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

#[test]
fn annulus_eta_values() {
    let eta = annulus_eta(0.5f64);
    assert!((eta[0] - 7.0 / 34.0).abs() <= 1e-12);
    let lin = annulus_linear_system(0.5);
    for k in 0..4 {
        assert!((eta[k] - lin[k]).abs() <= 1e-12, "{k}: {} vs {}", eta[k], lin[k]);
    }
    assert!((annulus_eta(0.01f64)[2] - 0.51125).abs() <= 1e-3);
}

#[test]
fn annulus_boundary_conditions() {
    for (a, rr, v) in [(1.0f64, 8.0f64, 1.0f64), (0.5, 2.0, -2.0), (1.0, 1.5, 0.3)] {
        let c = annulus_coeffs(a, rr, v).unwrap();
        assert!(c.f(a).abs() <= 1e-10 * rr * rr);
        assert!(c.df(a).abs() <= 1e-10 * rr);
        assert!((c.f(rr) - v * rr * rr / 2.0).abs() <= 1e-10 * rr * rr);
        assert!((c.df(rr) - v * rr).abs() <= 1e-10 * rr);
    }
    assert!(annulus_coeffs(2.0, 1.0, 1.0).is_err());
    assert!(matches!(annulus_flow(0.5, 0.0, 1.0, 4.0, 1.0), Err(Error::Domain { .. })));
}

#[test]
fn annulus_small_lambda_matches_exterior() {
    let (a, v) = (1.0f64, 1.0f64);
    let rr = 1e3;
    let lambda = a / rr;
    for r in [1.0, 1.5, 2.5, 4.0] {
        for theta in [0.0f64, 0.7, 1.5] {
            let (ur, ut, _) = annulus_flow(r, theta, a, rr, v).unwrap();
            let x = Vec3d::new(r * theta.sin(), 0.0, r * theta.cos());
            let u = uniform_flow(&x, a, &Vec3d::unit(2)).unwrap().u;
            let er = x.scale(1.0 / r);
            let et = Vec3d::new(theta.cos(), 0.0, -theta.sin());
            assert!((ur - u.dot(&er)).abs() <= 5.0 * lambda * v);
            assert!((ut - u.dot(&et)).abs() <= 5.0 * lambda * v);
        }
    }
    let (ur, _, _) = annulus_flow(3.0f64, 0.0, 1.0, 1e4, 1.0).unwrap();
    assert!((ur - (1.0 - 1.5 / 3.0 + 0.5 / 27.0)).abs() <= 1e-3);
}

#[test]
fn annulus_cartesian_and_profile() {
    let (a, rr) = (1.0, 8.0);
    let v = Vec3d::unit(0);
    let x = Vec3d::new(0.0, 3.0, 0.0);
    let u = annulus_velocity(&x, a, rr, &v).unwrap();
    let g = annulus_rescaled_profile(3.0, a, rr).unwrap();
    assert!((3.0 * (u[0] - 1.0) - g).abs() <= 1e-12);
    assert!((annulus_rescaled_profile(a, a, rr).unwrap() + a).abs() <= 1e-12);
    let on = annulus_velocity(&Vec3d::new(0.6, 0.0, 0.8), a, rr, &Vec3d::new(0.2, 0.3, -0.4)).unwrap();
    assert!(on.max_abs() <= 1e-12);
    let outer = annulus_velocity(&Vec3d::new(0.0, 0.0, rr), a, rr, &Vec3d::new(0.2, 0.3, -0.4)).unwrap();
    assert!((outer - Vec3d::new(0.2, 0.3, -0.4)).max_abs() <= 1e-12);
}
