//! Desk-scale validation suite.

use std::f64::consts::PI;

use nemflow::aniso::{m_component, GammaSet};
use nemflow::farfield::{green_g_realspace, green_symbols};
use nemflow::forcing::ForcingContext;
use nemflow::nematic::NematicParams;
use nemflow::quad::sphere_quadrature;
use nemflow::solver::{build_grid, extract_drag, picard_solve, OuterBc, PicardOptions};
use nemflow::stokes_iso::{analytic_surface_drag, annulus_eta, oseen_tensor};
use nemflow::{Mat3d, Vec3d};
use serde::Serialize;

use crate::error::Result;

/// One check with its measured value.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub threshold: f64,
    pub pass: bool,
}

fn check(name: &'static str, measured: f64, threshold: f64) -> Check {
    Check {
        name,
        measured,
        threshold,
        pass: measured.is_finite() && measured <= threshold,
    }
}

/// Runs the suite; failures are entries, not errors.
pub fn validate_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let eta = annulus_eta(0.5f64);
    out.push(check("eta_A(1/2) = 7/34", (eta[0] - 7.0 / 34.0).abs(), 1e-12));
    out.push(check("eta_C(0.01) = 0.51125", (annulus_eta(0.01f64)[2] - 0.51125).abs(), 1e-3));

    let rule = sphere_quadrature::<f64>(20)?;
    let v = Vec3d::new(0.3, -0.4, 1.2);
    let d = analytic_surface_drag(1.0, &v, &rule)?;
    out.push(check("analytic drag = 6 pi a v*", (d - v.scale(6.0 * PI)).norm() / (6.0 * PI * v.norm()), 1e-6));

    let s = 0.7;
    let n = Vec3d::new(1.0, 2.0, 2.0).scale(1.0 / 3.0);
    let m2 = m_component(2, s, &n)?;
    let m3 = m_component(3, s, &n)?;
    let m6 = m_component(6, s, &n)?;
    let m11 = m_component(11, s, &n)?;
    out.push(check("M3 = (s/6) M2", m3.add(&m2.scale(-s / 6.0)).max_abs(), 1e-13));
    out.push(check("M11 = (2s^2/3) M6", m11.add(&m6.scale(-2.0 * s * s / 3.0)).max_abs(), 1e-13));

    let big = sphere_quadrature::<f64>(24)?;
    let mut worst: f64 = 0.0;
    for k in 0..3 {
        for l in 0..3 {
            let m = big.try_integrate(|w| Ok(oseen_tensor(w)?.d2e.slice(k, l)))?;
            worst = worst.max(m.max_abs());
        }
    }
    out.push(check("sphere mean of D2E", worst, 1e-12));
    let xx = rule.integrate(|w| w.outer(w).scale(3.0));
    out.push(check("int 3 xx = 4 pi I", (xx - Mat3d::identity().scale(4.0 * PI)).max_abs(), 1e-12));

    let iso = nemflow::aniso::assemble_m(&GammaSet::zero(), s, &n);
    let sym = green_symbols(&iso)?;
    let mut gerr: f64 = 0.0;
    for w in rule.nodes.iter().take(40) {
        let g = green_g_realspace(&sym, w, 256)?;
        gerr = gerr.max((g - oseen_tensor(w)?.pair.e).max_abs());
    }
    out.push(check("gamma = 0 Green inversion", gerr, 1e-8));

    let grid = build_grid(8.0, 48)?;
    let params = NematicParams::new(1.0, 0.5, Vec3d::unit(2))?;
    let ctx = ForcingContext::new(params, GammaSet::zero(), Vec3d::unit(0));
    let f = picard_solve(&grid, &ctx, OuterBc::AnalyticEs, &PicardOptions::default())?;
    out.push(check("Picard at gamma = 0 takes one step", f.picard_iterations as f64, 1.0));
    let drag = extract_drag(&f, &ctx, &rule)?;
    out.push(check("grid drag vs 6 pi (n = 48)", (drag[0] - 6.0 * PI).abs() / (6.0 * PI), 0.05));
    out.push(check("discrete divergence", f.max_divergence(), 1e-8));
    Ok(out)
}
