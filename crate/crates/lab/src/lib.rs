//! Experiment driver for the Willmore sphere laboratory: configuration,
//! the invariant suite, single solves and ε sweeps.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod scaling;
pub mod solve;
pub mod verify;

pub use config::Config;
pub use error::LabError;
pub use output::Output;

/// `verify`: writes `report.txt` and fails with the number of failed checks.
pub fn cmd_verify(cfg: &Config, out: &Output) -> Result<Vec<verify::Check>, LabError> {
    let checks = verify::run(cfg)?;
    out.write("report.txt", &format!("{}{}", out.header("verify"), verify::report(&checks)))?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(LabError::ChecksFailed { failed, total: checks.len() });
    }
    Ok(checks)
}

pub fn cmd_solve(cfg: &Config, out: &Output) -> Result<solve::Summary, LabError> {
    solve::run(cfg, out)
}

pub fn cmd_scaling(cfg: &Config, out: &Output) -> Result<scaling::Study, LabError> {
    scaling::run(cfg, out)
}
