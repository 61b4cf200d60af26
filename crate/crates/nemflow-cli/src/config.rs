//! Scenario configuration.

use std::path::{Path, PathBuf};

use nemflow::aniso::GammaSet;
use nemflow::forcing::ForcingContext;
use nemflow::nematic::{s_star, LdgCoeffs, NematicParams};
use nemflow::solver::{build_grid, Grid, LinearOptions, OuterBc, PicardOptions};
use nemflow::{ForcingContextd, Vec3};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// The ten free viscosity ratios by name.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GammaConfig {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub gamma4: f64,
    pub gamma5: f64,
    pub gamma6: f64,
    pub gamma7: f64,
    pub gamma9: f64,
    pub gamma10: f64,
    pub gamma11: f64,
}

impl GammaConfig {
    /// Ratios as a [`GammaSet`].
    pub fn to_set(&self) -> GammaSet<f64> {
        GammaSet::from_ten([
            self.gamma1,
            self.gamma2,
            self.gamma3,
            self.gamma4,
            self.gamma5,
            self.gamma6,
            self.gamma7,
            self.gamma9,
            self.gamma10,
            self.gamma11,
        ])
    }
}

/// Landau–de Gennes coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LdgConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Outer boundary mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcMode {
    FarVStar,
    AnalyticEs,
    Annulus,
}

/// Grid settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// Box half-width `R`.
    pub half_width: f64,
    /// Cells per axis.
    pub cells: usize,
    /// Outer boundary mode.
    pub bc_mode: BcMode,
    /// Outer radius for `annulus` mode.
    pub annulus_radius: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            half_width: 6.0,
            cells: 48,
            bc_mode: BcMode::FarVStar,
            annulus_radius: None,
        }
    }
}

/// Solver tolerances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    pub relaxation: f64,
    pub linear_tol: f64,
    pub linear_max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let p = PicardOptions::default();
        Self {
            picard_tol: p.tol,
            picard_max_iter: p.max_iter,
            relaxation: p.relaxation,
            linear_tol: p.linear.tol,
            linear_max_iter: p.linear.max_iter,
        }
    }
}

/// Field file format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldFormat {
    Csv,
    Vtk,
    Both,
}

/// Requested outputs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Velocity and pressure fields.
    pub fields: bool,
    pub field_format: FieldFormat,
    /// Rescaled profiles along the coordinate axes.
    pub profiles: bool,
    /// First-order deviation field.
    pub perturbation: bool,
    /// Analytic far-field report.
    pub farfield_report: bool,
    /// Drag and its decomposition over `v* = e₁, e₂, e₃`.
    pub drag: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            fields: true,
            field_format: FieldFormat::Csv,
            profiles: true,
            perturbation: false,
            farfield_report: false,
            drag: true,
        }
    }
}

/// A complete scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub gamma: GammaConfig,
    /// Anchoring strength.
    pub w: f64,
    /// Scalar order; exclusive with `ldg`.
    pub s_star: Option<f64>,
    /// Landau–de Gennes coefficients; exclusive with `s_star`.
    pub ldg: Option<LdgConfig>,
    pub n_star: [f64; 3],
    pub v_star: [f64; 3],
    /// Replace the Q-field by `Q*`.
    pub frozen_q: bool,
    pub grid: GridConfig,
    pub solver: SolverConfig,
    pub outputs: OutputConfig,
    /// Directory for artifacts.
    pub output_dir: PathBuf,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            gamma: GammaConfig::default(),
            w: 1.0,
            s_star: Some(0.5),
            ldg: None,
            n_star: [0.0, 0.0, 1.0],
            v_star: [1.0, 0.0, 0.0],
            frozen_q: false,
            grid: GridConfig::default(),
            solver: SolverConfig::default(),
            outputs: OutputConfig::default(),
            output_dir: PathBuf::from("nemflow-out"),
        }
    }
}

impl ScenarioConfig {
    /// Parses and validates a JSON document; `n*` is normalized.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut c: Self = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        c.validate()?;
        let n = Vec3(c.n_star).normalized().ok_or(CliError::Schema("n_star must be nonzero".into()))?;
        c.n_star = n.0;
        Ok(c)
    }

    /// Reads a config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    /// Checks the constraints serde cannot express.
    pub fn validate(&self) -> Result<()> {
        match (self.s_star, self.ldg) {
            (Some(_), Some(_)) => return Err(CliError::Schema("give either s_star or ldg, not both".into())),
            (None, None) => return Err(CliError::Schema("one of s_star or ldg is required".into())),
            _ => {}
        }
        if self.grid.bc_mode == BcMode::Annulus && self.grid.annulus_radius.is_none() {
            return Err(CliError::Schema("annulus mode needs grid.annulus_radius".into()));
        }
        let finite = self.gamma.to_set().to_ten().iter().chain(&self.n_star).chain(&self.v_star).all(|x| x.is_finite());
        if !finite || !self.w.is_finite() {
            return Err(CliError::Schema("all numeric entries must be finite".into()));
        }
        Ok(())
    }

    /// Scalar order parameter from `s_star` or the LdG coefficients.
    pub fn order(&self) -> Result<f64> {
        match (self.s_star, self.ldg) {
            (Some(s), None) => Ok(s),
            (None, Some(l)) => Ok(s_star(&LdgCoeffs::new(l.a, l.b, l.c)?)?),
            _ => Err(CliError::Schema("give exactly one of s_star or ldg".into())),
        }
    }

    /// Forcing context of the scenario.
    pub fn context(&self) -> Result<ForcingContextd> {
        let params = NematicParams::new(self.w, self.order()?, Vec3(self.n_star))?;
        Ok(ForcingContext::new(params, self.gamma.to_set(), Vec3(self.v_star)).frozen(self.frozen_q))
    }

    /// Grid of the scenario.
    pub fn build_grid(&self) -> Result<Grid> {
        Ok(build_grid(self.grid.half_width, self.grid.cells)?)
    }

    /// Outer boundary data.
    pub fn outer_bc(&self) -> OuterBc {
        match self.grid.bc_mode {
            BcMode::FarVStar => OuterBc::FarVStar,
            BcMode::AnalyticEs => OuterBc::AnalyticEs,
            BcMode::Annulus => OuterBc::Annulus {
                outer_radius: self.grid.annulus_radius.unwrap_or(f64::NAN),
            },
        }
    }

    /// Picard settings.
    pub fn picard_options(&self) -> PicardOptions {
        PicardOptions {
            tol: self.solver.picard_tol,
            max_iter: self.solver.picard_max_iter,
            relaxation: self.solver.relaxation,
            linear: self.linear_options(),
        }
    }

    /// Inner linear solver settings.
    pub fn linear_options(&self) -> LinearOptions {
        LinearOptions {
            tol: self.solver.linear_tol,
            max_iter: self.solver.linear_max_iter,
        }
    }
}

impl ScenarioConfig {
    /// Copy with `γ₁, γ₂` replaced.
    pub fn with_gamma(&self, gamma1: f64, gamma2: f64) -> Self {
        let mut c = self.clone();
        c.gamma.gamma1 = gamma1;
        c.gamma.gamma2 = gamma2;
        c
    }
}
