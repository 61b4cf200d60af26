//! Scenario runs, γ sweeps and the annulus benchmark.

use std::path::Path;
use std::time::Instant;

use nemflow::farfield::{drag_decompose, farfield_report, FarfieldRules};
use nemflow::quad::sphere_quadrature;
use nemflow::solver::{
    build_grid, extract_drag, perturbation_field, picard_solve, picard_solve_with, relative_l2_error, rescaled_profile,
    FlowField, OuterBc, PerturbationBase, PicardOptions, Sampling, StokesSystem,
};
use nemflow::stokes_iso::{annulus_eta, annulus_rescaled_profile, annulus_velocity};
use nemflow::{ForcingContextd, Vec3d};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{FieldFormat, ScenarioConfig};
use crate::error::{CliError, Result};
use crate::export::{write_csv, write_vtk};

/// Environment variable overriding the worker count of sweeps.
pub const THREADS_ENV: &str = "NEMFLOW_THREADS";

/// Sphere degree used for drag integrals.
const DRAG_RULE_DEGREE: usize = 20;

/// Samples per exported profile.
const PROFILE_POINTS: usize = 64;

/// Output file with its content hash.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
}

/// Structured error report.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
}

/// Drag coefficients across and along `n*`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DragDecomposition {
    pub gamma_par: f64,
    pub gamma_perp: f64,
    pub residual: f64,
}

/// Record of one run.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub status: &'static str,
    pub error: Option<ErrorReport>,
    pub config: ScenarioConfig,
    pub picard_iterations: usize,
    pub picard_history: Vec<f64>,
    pub linear_history: Vec<f64>,
    pub max_divergence: Option<f64>,
    pub drag: Option<[f64; 3]>,
    pub drag_decomposition: Option<DragDecomposition>,
    pub wall_time_s: f64,
    pub files: Vec<FileEntry>,
}

impl Manifest {
    fn new(config: &ScenarioConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            status: "ok",
            error: None,
            config: config.clone(),
            picard_iterations: 0,
            picard_history: Vec::new(),
            linear_history: Vec::new(),
            max_divergence: None,
            drag: None,
            drag_decomposition: None,
            wall_time_s: 0.0,
            files: Vec::new(),
        }
    }
}

/// Hex SHA-256 of a file.
pub fn file_hash(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn record(m: &mut Manifest, dir: &Path, name: &str) -> Result<()> {
    let sha256 = file_hash(&dir.join(name))?;
    m.files.push(FileEntry {
        path: name.to_string(),
        sha256,
    });
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

fn export(field: &FlowField, format: FieldFormat, dir: &Path, stem: &str, m: &mut Manifest) -> Result<()> {
    if matches!(format, FieldFormat::Csv | FieldFormat::Both) {
        let name = format!("{stem}.csv");
        write_csv(field, &dir.join(&name))?;
        record(m, dir, &name)?;
    }
    if matches!(format, FieldFormat::Vtk | FieldFormat::Both) {
        let name = format!("{stem}.vtk");
        write_vtk(field, &dir.join(&name))?;
        record(m, dir, &name)?;
    }
    Ok(())
}

/// Rescaled profiles along the positive coordinate axes.
fn write_profiles(field: &FlowField, v_scale: f64, path: &Path) -> Result<()> {
    let r_max = 0.9 * field.grid.half_width;
    let mut text = String::from("axis,component,r,value\n");
    for axis in 0..3 {
        let sampling = Sampling::Ray {
            direction: Vec3d::unit(axis),
            r_min: 1.0,
            r_max,
            points: PROFILE_POINTS,
        };
        for comp in 0..3 {
            for (r, v) in rescaled_profile(field, comp, &sampling, v_scale)? {
                text.push_str(&format!("{},{},{r:.16e},{v:.16e}\n", axis + 1, comp + 1));
            }
        }
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Velocity in the plane `x₁ = 0` at cell-centre coordinates.
fn write_yz_plane(field: &FlowField, path: &Path) -> Result<()> {
    let g = &field.grid;
    let mut text = String::from("y,z,v1,v2,v3\n");
    for k in 0..g.n {
        for j in 0..g.n {
            let y = -g.half_width + (j as f64 + 0.5) * g.h;
            let z = -g.half_width + (k as f64 + 0.5) * g.h;
            let v = field.velocity_at(&Vec3d::new(0.0, y, z));
            text.push_str(&format!("{y:.16e},{z:.16e},{:.16e},{:.16e},{:.16e}\n", v[0], v[1], v[2]));
        }
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Drags for `v* = e₁, e₂, e₃` in the frame `n* = e₃` and their fit.
pub fn drag_structure(ctx: &ForcingContextd, grid: &nemflow::solver::Grid, bc: OuterBc, opts: &PicardOptions) -> Result<([Vec3d; 3], DragDecomposition)> {
    let rule = sphere_quadrature::<f64>(DRAG_RULE_DEGREE)?;
    let params = nemflow::nematic::NematicParams::new(ctx.params.w, ctx.params.s_star, Vec3d::unit(2))?;
    let aligned = nemflow::forcing::ForcingContext::new(params, ctx.gamma, Vec3d::unit(0)).frozen(ctx.frozen_q);
    let mut sys = StokesSystem::new(grid);
    let mut drags = [Vec3d::zero(); 3];
    for (k, slot) in drags.iter_mut().enumerate() {
        let c = aligned.with_v_star(Vec3d::unit(k));
        let f = picard_solve_with(&mut sys, &c, bc, opts)?;
        *slot = extract_drag(&f, &c, &rule)?;
    }
    let (gamma_par, gamma_perp, residual) = drag_decompose(&drags)?;
    Ok((
        drags,
        DragDecomposition {
            gamma_par,
            gamma_perp,
            residual,
        },
    ))
}

fn execute(config: &ScenarioConfig, dir: &Path, m: &mut Manifest) -> Result<()> {
    let ctx = config.context()?;
    let grid = config.build_grid()?;
    let bc = config.outer_bc();
    let opts = config.picard_options();
    let field = picard_solve(&grid, &ctx, bc, &opts)?;
    m.picard_iterations = field.picard_iterations;
    m.picard_history = field.picard_history.clone();
    m.linear_history = field.linear_history.clone();
    m.max_divergence = Some(field.max_divergence());
    let out = &config.outputs;
    if out.fields {
        export(&field, out.field_format, dir, "field", m)?;
    }
    if out.profiles {
        let v_scale = ctx.v_star.norm();
        if v_scale > 0.0 {
            write_profiles(&field, v_scale, &dir.join("profiles.csv"))?;
            record(m, dir, "profiles.csv")?;
        }
        write_yz_plane(&field, &dir.join("plane_yz.csv"))?;
        record(m, dir, "plane_yz.csv")?;
    }
    if out.perturbation {
        let zero = |_: &Vec3d| Vec3d::zero();
        let phi = perturbation_field(&grid, &ctx, PerturbationBase::Analytic, &zero, &config.linear_options())?;
        export(&phi, out.field_format, dir, "perturbation", m)?;
    }
    if out.farfield_report {
        let dirs: Vec<Vec3d> = (0..3).flat_map(|a| [Vec3d::unit(a), Vec3d::unit(a).scale(-1.0)]).collect();
        let rep = farfield_report(&ctx, 1.0, &dirs, &FarfieldRules::default())?;
        let json = serde_json::json!({
            "samples": rep.samples.iter().map(|s| serde_json::json!({
                "x_hat": s.x_hat.0, "amplitude": s.amplitude.0, "deviation": s.deviation.0,
            })).collect::<Vec<_>>(),
            "j_gamma": rep.j_gamma.0,
            "drag": rep.drag.0,
            "gamma_par": rep.gamma_par,
            "gamma_perp": rep.gamma_perp,
            "fit_residual": rep.fit_residual,
            "j_tail_bound": rep.j_tail_bound,
            "decay_warning": rep.decay_warning,
        });
        write_json(&dir.join("farfield.json"), &json)?;
        record(m, dir, "farfield.json")?;
    }
    if out.drag {
        let rule = sphere_quadrature::<f64>(DRAG_RULE_DEGREE)?;
        m.drag = Some(extract_drag(&field, &ctx, &rule)?.0);
        let (_, dec) = drag_structure(&ctx, &grid, bc, &opts)?;
        m.drag_decomposition = Some(dec);
    }
    Ok(())
}

/// Runs a scenario into `config.output_dir` and writes `manifest.json`,
/// also on failure.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Manifest> {
    let start = Instant::now();
    let dir = config.output_dir.clone();
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let mut m = Manifest::new(config);
    let outcome = execute(config, &dir, &mut m);
    m.wall_time_s = start.elapsed().as_secs_f64();
    if let Err(e) = &outcome {
        m.status = "error";
        m.error = Some(ErrorReport {
            kind: e.kind().into(),
            message: e.to_string(),
        });
    }
    write_json(&dir.join("manifest.json"), &m)?;
    outcome.map(|_| m)
}

/// One member of a γ sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepMember {
    pub gamma1: f64,
    pub gamma2: f64,
    pub picard_iterations: usize,
    /// `(r, r(v − v₀)/(Vγ₁))` along the sampling ray.
    pub profile: Vec<(f64, f64)>,
}

/// Sup-distance between two members' profiles.
#[derive(Clone, Debug, Serialize)]
pub struct SweepDistance {
    pub first: usize,
    pub second: usize,
    pub sup_distance: f64,
}

/// Result of a γ sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub members: Vec<SweepMember>,
    pub distances: Vec<SweepDistance>,
    /// Consecutive distances decrease along the list.
    pub monotone: bool,
    pub notes: Vec<String>,
}

/// Worker count from [`THREADS_ENV`], default 1.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(1)
}

/// Component of `v*` with the largest magnitude.
fn flow_component(v: &Vec3d) -> usize {
    (0..3).fold(0, |b, i| if v[i].abs() > v[b].abs() { i } else { b })
}

/// Runs `base` for each `(γ₁, γ₂)` and compares `r(v − v₀)/(Vγ₁)` along
/// the axis transverse to the flow and to `n*`.
pub fn gamma_sweep(base: &ScenarioConfig, gammas: &[(f64, f64)]) -> Result<SweepReport> {
    let ctx0 = base.with_gamma(0.0, 0.0).context()?;
    let grid = base.build_grid()?;
    let bc = base.outer_bc();
    let opts = base.picard_options();
    let v_scale = ctx0.v_star.norm();
    if v_scale == 0.0 {
        return Err(CliError::Schema("a sweep needs a nonzero v_star".into()));
    }
    let comp = flow_component(&ctx0.v_star);
    let dir = sweep_direction(&ctx0);
    let ray = Sampling::Ray {
        direction: dir,
        r_min: 1.5,
        r_max: 0.5 * grid.half_width,
        points: 33,
    };
    let points = ray.points()?;
    let v0 = picard_solve(&grid, &ctx0, bc, &opts)?;
    let mut notes = Vec::new();
    let kept: Vec<(f64, f64)> = gammas
        .iter()
        .copied()
        .filter(|&(g1, g2)| {
            let keep = g1 != 0.0;
            if !keep {
                notes.push(format!("gamma = ({g1}, {g2}) excluded: the rescaling divides by gamma1"));
            }
            keep
        })
        .collect();
    let threads = thread_count().min(kept.len().max(1));
    let run_one = |&(g1, g2): &(f64, f64)| -> Result<SweepMember> {
        let ctx = base.with_gamma(g1, g2).context()?;
        let f = picard_solve(&grid, &ctx, bc, &opts)?;
        let profile = points
            .iter()
            .map(|x| {
                let r = x.norm();
                (r, r * (f.velocity_at(x)[comp] - v0.velocity_at(x)[comp]) / (v_scale * g1))
            })
            .collect();
        Ok(SweepMember {
            gamma1: g1,
            gamma2: g2,
            picard_iterations: f.picard_iterations,
            profile,
        })
    };
    let mut results: Vec<Option<Result<SweepMember>>> = (0..kept.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        let chunk = kept.len().div_ceil(threads).max(1);
        let handles: Vec<_> = kept
            .chunks(chunk)
            .map(|part| s.spawn(|| part.iter().map(&run_one).collect::<Vec<_>>()))
            .collect();
        let mut idx = 0;
        for h in handles {
            for r in h.join().unwrap_or_else(|_| vec![Err(CliError::Argument("sweep worker panicked".into()))]) {
                results[idx] = Some(r);
                idx += 1;
            }
        }
    });
    let members = results
        .into_iter()
        .map(|r| r.unwrap_or_else(|| Err(CliError::Argument("missing sweep result".into()))))
        .collect::<Result<Vec<_>>>()?;
    let mut distances = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let d = members[i]
                .profile
                .iter()
                .zip(&members[j].profile)
                .fold(0.0f64, |m, (a, b)| m.max((a.1 - b.1).abs()));
            distances.push(SweepDistance {
                first: i,
                second: j,
                sup_distance: d,
            });
        }
    }
    let consecutive: Vec<f64> = distances.iter().filter(|d| d.second == d.first + 1).map(|d| d.sup_distance).collect();
    let monotone = consecutive.windows(2).all(|w| w[1] < w[0]);
    if members.len() == 1 {
        notes.push("single member: no distances".into());
    }
    Ok(SweepReport {
        members,
        distances,
        monotone,
        notes,
    })
}

/// Unit axis orthogonal to `v*` and `n*` where possible.
fn sweep_direction(ctx: &ForcingContextd) -> Vec3d {
    let c = ctx.v_star.cross(&ctx.params.n_star);
    if let Some(d) = c.normalized() {
        return d;
    }
    let comp = flow_component(&ctx.v_star);
    Vec3d::unit((comp + 1) % 3)
}

/// Outcome of the annulus benchmark.
#[derive(Clone, Debug, Serialize)]
pub struct AnnulusBench {
    pub lambda: f64,
    pub outer_radius: f64,
    pub half_width: f64,
    pub cells: usize,
    /// `[η_A, η_B, η_C, η_D]`.
    pub eta: [f64; 4],
    pub relative_l2_error: f64,
    /// Largest profile misfit relative to the largest profile value.
    pub profile_error: f64,
    pub max_divergence: f64,
    pub wall_time_s: f64,
}

/// Grid solve in the annulus `1 < r < 1/λ` with the largest box inside it.
pub fn bench_annulus(lambda: f64, cells: usize) -> Result<AnnulusBench> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(CliError::Argument(format!("lambda {lambda} outside (0, 1)")));
    }
    let start = Instant::now();
    let outer = 1.0 / lambda;
    let half_width = outer / (3f64.sqrt() * (1.0 + 2.0 / cells as f64));
    let grid = build_grid(half_width, cells)?;
    let v_star = Vec3d::unit(0);
    let params = nemflow::nematic::NematicParams::new(1.0, 0.5, Vec3d::unit(2))?;
    let ctx = nemflow::forcing::ForcingContext::new(params, nemflow::aniso::GammaSet::zero(), v_star);
    let f = picard_solve(&grid, &ctx, OuterBc::Annulus { outer_radius: outer }, &PicardOptions::default())?;
    let err = relative_l2_error(&f, 0.0, |x| annulus_velocity(x, 1.0, outer, &v_star))?;
    let sampling = Sampling::Ray {
        direction: Vec3d::unit(1),
        r_min: 1.5,
        r_max: 0.8 * half_width,
        points: 33,
    };
    let got = rescaled_profile(&f, 0, &sampling, 1.0)?;
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (r, v) in got {
        let want = annulus_rescaled_profile(r, 1.0, outer)?;
        worst = worst.max((v - want).abs());
        scale = scale.max(want.abs());
    }
    Ok(AnnulusBench {
        lambda,
        outer_radius: outer,
        half_width,
        cells,
        eta: annulus_eta(lambda),
        relative_l2_error: err,
        profile_error: worst / scale,
        max_divergence: f.max_divergence(),
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}
