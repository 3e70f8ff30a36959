//! Study configuration.
//!
//! ```toml
//! [background]
//! preset = "space_form(1)"
//!
//! [grid]
//! n = 128
//! levels = [64, 128, 256]
//!
//! [solver]
//! eps = 0.05
//! max_iter = 30
//!
//! [sweep]
//! eps = [0.1, 0.05, 0.025]
//! ```

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use willmore_core::background::{BackgroundSpec, CurvatureBackground};
use willmore_core::solver::SolverOptions;
use willmore_core::willmore::Laplacian;

use crate::error::LabError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub background: BackgroundSpec,
    pub grid: GridConfig,
    pub solver: SolverConfig,
    pub sweep: SweepConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            background: BackgroundSpec::preset("flat"),
            grid: GridConfig::default(),
            solver: SolverConfig::default(),
            sweep: SweepConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Resolution of solves, expansion sweeps and the kernel check.
    pub n: usize,
    /// Resolutions of the refinement checks.
    pub levels: Vec<usize>,
    /// Resolution of the moment quadrature.
    pub quadrature_n: usize,
    /// Chart disk on which expansion sweeps take their sup-norm.
    pub disk_radius: f64,
    /// Highest harmonic degree of the kernel basis.
    pub kernel_lmax: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { n: 128, levels: vec![64, 128, 256], quadrature_n: 256, disk_radius: 1.0, kernel_lmax: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Curvature scale of a single solve.
    pub eps: f64,
    pub target_area: f64,
    pub tol: Option<f64>,
    pub tol_rel: f64,
    pub tol_abs: f64,
    pub max_iter: usize,
    pub damping: f64,
    pub max_halvings: usize,
    pub lmax: usize,
    pub gauge: bool,
    pub area_tol: f64,
    pub laplacian: Laplacian,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let o = SolverOptions::default();
        SolverConfig {
            eps: 0.0,
            target_area: 4.0 * PI,
            tol: o.tol,
            tol_rel: o.tol_rel,
            tol_abs: o.tol_abs,
            max_iter: o.max_iter,
            damping: o.damping,
            max_halvings: o.max_halvings,
            lmax: o.lmax,
            gauge: o.gauge,
            area_tol: o.area_tol,
            laplacian: o.laplacian,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Explicit values; otherwise `eps_max · factor^k` for `k < count`.
    pub eps: Option<Vec<f64>>,
    pub eps_max: f64,
    pub factor: f64,
    pub count: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { eps: None, eps_max: 0.1, factor: 0.5, count: 3 }
    }
}

impl SweepConfig {
    /// Sweep values in decreasing order.
    pub fn values(&self) -> Vec<f64> {
        let mut v = match &self.eps {
            Some(e) => e.clone(),
            None => (0..self.count).map(|k| self.eps_max * self.factor.powi(k as i32)).collect(),
        };
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, LabError> {
        let cfg: Config = toml::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), LabError> {
        let bad = |m: String| Err(LabError::Config(m));
        if self.grid.n < 16 || !self.grid.n.is_multiple_of(2) {
            return bad(format!("grid.n must be even and at least 16, got {}", self.grid.n));
        }
        if let Some(n) = self.grid.levels.iter().find(|n| **n < 16 || **n % 2 != 0) {
            return bad(format!("grid.levels entries must be even and at least 16, got {n}"));
        }
        if !(self.grid.disk_radius > 0.0 && self.grid.disk_radius <= 1.5) {
            return bad(format!("grid.disk_radius must lie in (0, 1.5], got {}", self.grid.disk_radius));
        }
        if !(self.solver.target_area > 0.0) {
            return bad(format!("solver.target_area must be positive, got {}", self.solver.target_area));
        }
        if !(self.solver.eps >= 0.0) {
            return bad(format!("solver.eps must be non-negative, got {}", self.solver.eps));
        }
        let sweep = self.sweep.values();
        if sweep.is_empty() || sweep.iter().any(|e| !(*e > 0.0)) {
            return bad("sweep values must be positive and non-empty".into());
        }
        if self.sweep.eps.is_none() && !(self.sweep.factor > 0.0 && self.sweep.factor < 1.0) {
            return bad(format!("sweep.factor must lie in (0, 1), got {}", self.sweep.factor));
        }
        self.background_data()?;
        Ok(())
    }

    pub fn background_data(&self) -> Result<CurvatureBackground, LabError> {
        self.background.build().map_err(|e| LabError::Config(format!("background: {e}")))
    }

    pub fn solver_options(&self) -> SolverOptions {
        let s = &self.solver;
        SolverOptions {
            tol: s.tol,
            tol_rel: s.tol_rel,
            tol_abs: s.tol_abs,
            max_iter: s.max_iter,
            damping: s.damping,
            max_halvings: s.max_halvings,
            n: self.grid.n,
            lmax: s.lmax,
            gauge: s.gauge,
            area_tol: s.area_tol,
            laplacian: s.laplacian,
        }
    }
}

/// Documented defaults, shown by `--help`.
pub const DEFAULTS_HELP: &str = "\
Configuration file (TOML), every key optional:
  [background]  preset = \"flat\" | \"space_form(k)\" | \"gradient(s1,s2,s3)\"
                or ric = [6 upper-triangle entries], dric = [18 entries], scal_check
                default: preset = \"flat\"
  [grid]        n = 128 (solves, expansion sweeps, kernel check)
                levels = [64, 128, 256] (refinement checks)
                quadrature_n = 256, disk_radius = 1.0, kernel_lmax = 4
  [solver]      eps = 0.0, target_area = 4π, tol (unset: max(tol_rel·initial, tol_abs)),
                tol_rel = 1e-8, tol_abs = 1e-10, max_iter = 30, damping = 1.0,
                max_halvings = 10, lmax = 10, gauge = true, area_tol = 1e-10,
                laplacian = \"full\" | \"conformal\"
  [sweep]       eps = [..] explicit, or eps_max = 0.1, factor = 0.5, count = 3";
