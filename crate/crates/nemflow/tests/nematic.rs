mod common;

use common::*;
use nemflow::nematic::*;
use nemflow::tensor_core::QTensor;
use nemflow::{Error, Mat3d, Vec3d};
use rand::Rng;

fn params(r: &mut impl Rng) -> NematicParams<f64> {
    NematicParams::new(r.gen_range(0.3..5.0), r.gen_range(0.2..1.0), rand_unit(r)).unwrap()
}

/// Brute-force minimizer of the potential along `s(n⊗n − I/3)`.
fn scan_min(c: &LdgCoeffs<f64>) -> f64 {
    let n = Vec3d::unit(2);
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..=400_000 {
        let s = -4.0 + 8.0 * k as f64 / 400_000.0;
        let f = ldg_potential(&QTensor::nematic(s, &n), c).0;
        if f < best.0 {
            best = (f, s);
        }
    }
    best.1
}

#[test]
fn s_star_matches_scan() {
    let c = LdgCoeffs::<f64>::new(1.0, -1.0, 1.0).unwrap();
    assert!((s_star(&c).unwrap() - 1.5).abs() <= 1e-12);
    assert!((scan_min(&c) - 1.5).abs() <= 1e-4);
    let c = LdgCoeffs::<f64>::new(1.0, 1.0, 1.0).unwrap();
    assert!((s_star(&c).unwrap() + 1.5).abs() <= 1e-12);
    assert!((scan_min(&c) + 1.5).abs() <= 1e-4);
    let c = LdgCoeffs::new(0.7, 2.3, 0.4).unwrap();
    assert!(s_star(&c).unwrap() < 0.0);
    assert!((s_star(&c).unwrap() - scan_min(&c)).abs() <= 1e-4);
}

#[test]
fn s_star_refuses_zero_b() {
    let c = LdgCoeffs::new(1.0, 0.0, 1.0).unwrap();
    match s_star(&c) {
        Err(Error::InvalidInput(m)) => assert!(m.contains("B = 0")),
        other => panic!("{other:?}"),
    }
    assert!(LdgCoeffs::new(-1.0, 0.0, 1.0).is_err());
}

#[test]
fn params_validation() {
    assert!(NematicParams::new(0.0, 0.5, Vec3d::unit(2)).is_err());
    assert!(NematicParams::new(1.0, 0.5, Vec3d::zero()).is_err());
    let p = NematicParams::new(1.0, 0.5, Vec3d::new(0.0, 0.0, 2.0)).unwrap();
    assert_eq!(p.n_star, Vec3d::unit(2));
}

#[test]
fn q_field_values() {
    let mut r = rng(60);
    let p = params(&mut r);
    let x = rand_unit(&mut r);
    let q = q_field(&x, &p).unwrap().q.mat();
    let qb = x.outer(&x).scale(p.s_star) - Mat3d::identity().scale(p.s_star / 3.0);
    let want = p.q_star().mat().scale(1.0 / (1.0 + p.w)) + qb.scale(p.w / (3.0 + p.w));
    assert!(rel_mat(&q, &want) <= 1e-13);
    for rad in [10.0, 100.0, 1000.0] {
        let q = q_field(&x.scale(rad), &p).unwrap().q.mat();
        assert!((q - p.q_star().mat()).norm() * rad <= 2.0 * p.s_star);
    }
    assert!(matches!(q_field(&x.scale(0.5), &p), Err(Error::Domain { .. })));
}

#[test]
fn q_field_is_harmonic_symmetric_traceless() {
    let mut r = rng(61);
    let h = 1e-3;
    for _ in 0..20 {
        let p = params(&mut r);
        let x = rand_point(&mut r, 1.1, 5.0);
        let s = q_field(&x, &p).unwrap();
        let q0 = s.q.mat();
        assert!(q0.is_symmetric(1e-12) && q0.trace().abs() <= 1e-12);
        let mut lap = q0.scale(-6.0);
        for k in 0..3 {
            let e = Vec3d::unit(k).scale(h);
            lap += q_field(&(x + e), &p).unwrap().q.mat() + q_field(&(x - e), &p).unwrap().q.mat();
        }
        assert!(lap.scale(1.0 / (h * h)).max_abs() <= 1e-5);
        for k in 0..3 {
            assert!(s.grad.slice(k).is_symmetric(1e-12) && s.grad.slice(k).trace().abs() <= 1e-12);
        }
    }
}

#[test]
fn q_derivatives_match_central_differences() {
    let mut r = rng(62);
    let h = 1e-4;
    for _ in 0..20 {
        let p = params(&mut r);
        let x = rand_point(&mut r, 1.2, 6.0);
        let s = q_field(&x, &p).unwrap();
        for k in 0..3 {
            let e = Vec3d::unit(k).scale(h);
            let sp = q_field(&(x + e), &p).unwrap();
            let sm = q_field(&(x - e), &p).unwrap();
            let dq = (sp.q.mat() - sm.q.mat()).scale(0.5 / h);
            assert!(rel_mat(&dq, &s.grad.slice(k)) <= 1e-6);
            for l in 0..3 {
                let d2 = (sp.grad.slice(l) - sm.grad.slice(l)).scale(0.5 / h);
                let exact = s.hess.slice(k, l);
                assert!((d2 - exact).max_abs() <= 1e-6 * exact.max_abs().max(1e-3));
            }
        }
    }
}

#[test]
fn q_gradient_decays_like_inverse_square() {
    let mut r = rng(63);
    let p = params(&mut r);
    let d = rand_unit(&mut r);
    for rad in [2.0, 10.0, 50.0, 100.0] {
        let g = q_field(&d.scale(rad), &p).unwrap().grad;
        let n: f64 = (0..3).map(|k| g.slice(k).norm_sq()).sum::<f64>().sqrt();
        assert!(n * rad * rad <= 2.0 * p.s_star);
    }
}

/// Coordinates on symmetric traceless matrices.
fn chart(c: [f64; 5]) -> Mat3d {
    Mat3d::from_fn(|i, j| {
        let m = [[c[0], c[2], c[3]], [c[2], c[1], c[4]], [c[3], c[4], -c[0] - c[1]]];
        m[i][j]
    })
}

#[test]
fn ldg_derivative_matches_fd() {
    let mut r = rng(64);
    let co = LdgCoeffs::new(1.3, -0.7, 0.9).unwrap();
    assert_eq!(ldg_potential(&QTensor::zero(), &co).0, 0.0);
    for _ in 0..10 {
        let c: [f64; 5] = std::array::from_fn(|_| r.gen_range(-0.5..0.5));
        let q = QTensor::new(chart(c)).unwrap();
        let (_, df) = ldg_potential(&q, &co);
        let h = 1e-6;
        for k in 0..5 {
            let mut cp = c;
            let mut cm = c;
            cp[k] += h;
            cm[k] -= h;
            let fd = (ldg_potential(&QTensor::new(chart(cp)).unwrap(), &co).0
                - ldg_potential(&QTensor::new(chart(cm)).unwrap(), &co).0)
                / (2.0 * h);
            let dir = chart(std::array::from_fn(|i| if i == k { 1.0 } else { 0.0 }));
            let an = df.mat().ddot(&dir);
            assert!((fd - an).abs() <= 1e-6 * an.abs().max(1.0));
        }
    }
}

#[test]
fn ldg_is_critical_at_nematic_state() {
    let co = LdgCoeffs::<f64>::new(1.0, -1.0, 1.0).unwrap();
    let s = s_star(&co).unwrap();
    let (_, df) = ldg_potential(&QTensor::nematic(s, &Vec3d::new(0.6, 0.0, 0.8)), &co);
    assert!(df.mat().max_abs() <= 1e-10);
}

fn dissipation_terms(q: &Mat3d, a: &Mat3d, qr: &Mat3d, z: &[f64; 11]) -> f64 {
    let mut q2 = Mat3d::zero();
    let mut a2 = Mat3d::zero();
    let mut qrq = Mat3d::zero();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                q2.0[i][j] += q.0[i][k] * q.0[k][j];
                a2.0[i][j] += a.0[i][k] * a.0[k][j];
                qrq.0[i][j] += qr.0[i][k] * q.0[k][j];
            }
        }
    }
    let dot = |x: &Mat3d, y: &Mat3d| -> f64 { (0..9).map(|n| x.0[n / 3][n % 3] * y.0[n / 3][n % 3]).sum() };
    let qa = dot(q, a);
    z[0] / 2.0 * dot(qr, qr)
        + z[1] * dot(a, qr)
        + z[2] * dot(&qrq, a)
        + z[3] * dot(q, &a2)
        + z[4] * dot(&q2, &a2)
        + z[5] / 2.0 * qa * qa
        + z[6] / 2.0 * dot(a, a) * dot(q, q)
        + z[7] / 2.0 * dot(a, a)
        + z[8] * dot(qr, q) * qa
        + z[9] * dot(&q2, a) * qa
        + z[10] / 2.0 * dot(q, q) * qa * qa
}

#[test]
fn dissipation_matches_term_sum() {
    let mut r = rng(65);
    for _ in 0..20 {
        let q = QTensor::project(&rand_q(&mut r));
        let a = rand_q(&mut r);
        let qr = QTensor::project(&rand_q(&mut r));
        let z: [f64; 11] = std::array::from_fn(|i| if i == 7 { 1.0 } else { r.gen_range(-1.0..1.0) });
        let got = dissipation_r(&q, &a, &qr, &ZetaSet::new(z).unwrap());
        assert!(rel(got, dissipation_terms(&q.mat(), &a, &qr.mat(), &z)) <= 1e-13);
    }
    assert!(ZetaSet::new([0.0; 11]).is_err());
}

#[test]
fn dissipation_at_zero_q() {
    let mut r = rng(66);
    let a = rand_q(&mut r);
    let qr = QTensor::project(&rand_q(&mut r));
    let z: [f64; 11] = std::array::from_fn(|_| r.gen_range(0.1..1.0));
    let got = dissipation_r(&QTensor::zero(), &a, &qr, &ZetaSet::new(z).unwrap());
    let want = z[0] / 2.0 * qr.mat().norm_sq() + z[1] * a.ddot(&qr.mat()) + z[7] / 2.0 * a.norm_sq();
    assert!(rel(got, want) <= 1e-13);
}

#[test]
fn dissipation_positivity_criterion() {
    let mut r = rng(67);
    let sample = |z: [f64; 11], r: &mut rand_chacha::ChaCha8Rng| {
        let mut min = f64::INFINITY;
        for _ in 0..2000 {
            let q = QTensor::project(&rand_q(r));
            let a = rand_q(r);
            let qr = QTensor::project(&rand_q(r));
            min = min.min(dissipation_r(&q, &a, &qr, &ZetaSet::new(z).unwrap()));
        }
        min
    };
    let mut bad = [0.0; 11];
    bad[0] = 1.0;
    bad[1] = 2.0;
    bad[7] = 1.0;
    assert!(sample(bad, &mut r) < 0.0);
    let mut good = bad;
    good[1] = 0.9;
    assert!(sample(good, &mut r) >= -1e-14);
}
