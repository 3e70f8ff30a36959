//! `willmore-lab solve`: a single constrained solve.

use willmore_core::background::{MetricJet, Order};
use willmore_core::immersion::{area, willmore_energy, write_snapshot, DiscreteImmersion};
use willmore_core::solver::{roundness, solve, SolverState};
use willmore_core::willmore::{hawking_mass_from, HawkingConvention};
use willmore_core::Error as CoreError;

use crate::config::Config;
use crate::error::LabError;
use crate::output::{fmt, Output};

/// Scalar outcome of a solve.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub eps: f64,
    pub converged: bool,
    pub obstruction: bool,
    pub iter: usize,
    pub residual_norm: f64,
    pub l1_residual: f64,
    pub lambda: f64,
    pub area: f64,
    pub willmore: f64,
    pub roundness: f64,
    pub center_drift: f64,
    pub hawking_area: f64,
    pub hawking_sqrt_area: f64,
}

impl Summary {
    pub fn of(state: &SolverState, jet: &MetricJet) -> Result<Self, LabError> {
        let a = area(&state.im, jet)?;
        let w = willmore_energy(&state.im, jet)?;
        Ok(Summary {
            eps: state.eps,
            converged: state.converged,
            obstruction: state.obstruction,
            iter: state.iter,
            residual_norm: state.residual_norm,
            l1_residual: state.l1_residual,
            lambda: state.lambda,
            area: a,
            willmore: w,
            roundness: roundness(&state.im),
            center_drift: state.center_drift,
            hawking_area: hawking_mass_from(a, w, HawkingConvention::Area),
            hawking_sqrt_area: hawking_mass_from(a, w, HawkingConvention::SqrtArea),
        })
    }

    /// `λ/ε²`, undefined at `ε = 0`.
    pub fn lambda_ratio(&self) -> f64 {
        if self.eps > 0.0 {
            self.lambda / (self.eps * self.eps)
        } else {
            f64::NAN
        }
    }

    pub fn text(&self) -> String {
        format!(
            "eps = {}\nconverged = {}\nobstruction = {}\niterations = {}\nresidual_norm = {}\nl1_residual = {}\n\
             lambda = {}\nlambda_over_eps2 = {}\narea = {}\nwillmore = {}\nroundness = {}\ncenter_drift = {}\n\
             hawking_mass_area = {}\nhawking_mass_sqrt_area = {}\n",
            fmt(self.eps),
            self.converged,
            self.obstruction,
            self.iter,
            fmt(self.residual_norm),
            fmt(self.l1_residual),
            fmt(self.lambda),
            fmt(self.lambda_ratio()),
            fmt(self.area),
            fmt(self.willmore),
            fmt(self.roundness),
            fmt(self.center_drift),
            fmt(self.hawking_area),
            fmt(self.hawking_sqrt_area),
        )
    }
}

/// Iterate carried by a solver error, if any.
pub fn error_snapshot(e: &CoreError) -> Option<&DiscreteImmersion> {
    match e {
        CoreError::LineSearch { snapshot, .. } | CoreError::SolverDegenerate { snapshot, .. } => Some(snapshot),
        _ => None,
    }
}

/// Solves at `eps`, returning the state and its summary.
pub fn solve_at(cfg: &Config, eps: f64) -> Result<(SolverState, Summary), LabError> {
    let bg = cfg.background_data()?;
    let jet = MetricJet::new(bg.clone(), eps, Order::Three);
    jet.check_admissible().map_err(LabError::from_core)?;
    let state = solve(&bg, eps, cfg.solver.target_area, &cfg.solver_options()).map_err(LabError::from_core)?;
    let summary = Summary::of(&state, &jet)?;
    Ok((state, summary))
}

/// Writes `report.txt`, `solver_log.csv` and `snapshot.txt`. A solver error
/// still leaves its iterate snapshot and a report behind.
pub fn run(cfg: &Config, out: &Output) -> Result<Summary, LabError> {
    let eps = cfg.solver.eps;
    match solve_at(cfg, eps) {
        Ok((state, summary)) => {
            out.write("solver_log.csv", &format!("{}{}", out.header("solve"), state.log_text()))?;
            out.write("snapshot.txt", &write_snapshot(&state.im))?;
            out.write("report.txt", &format!("{}{}", out.header("solve"), summary.text()))?;
            Ok(summary)
        }
        Err(e) => {
            if let LabError::Numerical(inner) | LabError::Inadmissible(inner) = &e {
                if let Some(s) = error_snapshot(inner) {
                    out.write("snapshot.txt", &write_snapshot(s))?;
                }
            }
            out.write("report.txt", &format!("{}eps = {}\nerror = {e}\n", out.header("solve"), fmt(eps)))?;
            Err(e)
        }
    }
}
