//! `willmore-lab scaling`: constrained solves over an ε sweep.

use willmore_core::fit::loglog_slope;

use crate::config::Config;
use crate::error::LabError;
use crate::output::{fmt, Output};
use crate::solve::{solve_at, Summary};

pub const CSV_COLUMNS: &str = "eps,status,converged,obstruction,iterations,residual_norm,l1_residual,lambda,\
lambda_over_eps2,roundness,roundness_over_eps2,center_drift,willmore,area,flag,error";

/// One sweep row; failures keep their message and leave the numbers empty.
#[derive(Clone, Debug)]
pub struct Row {
    pub eps: f64,
    pub result: Result<Summary, String>,
}

impl Row {
    /// `ok`, `obstruction`, `not_converged` or `failed`.
    pub fn flag(&self) -> &'static str {
        match &self.result {
            Err(_) => "failed",
            Ok(s) if s.obstruction => "obstruction",
            Ok(s) if !s.converged => "not_converged",
            Ok(_) => "ok",
        }
    }

    pub fn csv(&self) -> String {
        match &self.result {
            Ok(s) => format!(
                "{},ok,{},{},{},{},{},{},{},{},{},{},{},{},{},",
                fmt(self.eps),
                s.converged,
                s.obstruction,
                s.iter,
                fmt(s.residual_norm),
                fmt(s.l1_residual),
                fmt(s.lambda),
                fmt(s.lambda_ratio()),
                fmt(s.roundness),
                fmt(s.roundness / (self.eps * self.eps)),
                fmt(s.center_drift),
                fmt(s.willmore),
                fmt(s.area),
                self.flag()
            ),
            Err(msg) => format!("{},error,,,,,,,,,,,,,{},\"{}\"", fmt(self.eps), self.flag(), msg.replace('"', "'")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Study {
    pub rows: Vec<Row>,
}

impl Study {
    pub fn csv_body(&self) -> String {
        let mut s = format!("{CSV_COLUMNS}\n");
        for r in &self.rows {
            s.push_str(&r.csv());
            s.push('\n');
        }
        s
    }

    fn successes(&self) -> Vec<(f64, &Summary)> {
        self.rows.iter().filter_map(|r| r.result.as_ref().ok().map(|s| (r.eps, s))).collect()
    }

    /// `max/min` of `λ/ε²` over converged rows; NaN when fewer than two,
    /// infinite when the ratios change sign.
    pub fn lambda_spread(&self) -> f64 {
        let v: Vec<f64> = self.successes().iter().filter(|(_, s)| s.converged).map(|(_, s)| s.lambda_ratio()).collect();
        if v.len() < 2 {
            return f64::NAN;
        }
        let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(*x), b.max(*x)));
        if lo * hi <= 0.0 {
            return f64::INFINITY;
        }
        hi.abs().max(lo.abs()) / hi.abs().min(lo.abs())
    }

    /// Log-log slope of roundness against ε over successful rows.
    pub fn roundness_slope(&self) -> f64 {
        let s = self.successes();
        let e: Vec<f64> = s.iter().map(|(e, _)| *e).collect();
        let r: Vec<f64> = s.iter().map(|(_, s)| s.roundness).collect();
        loglog_slope(&e, &r)
    }

    pub fn flagged(&self) -> bool {
        self.rows.iter().any(|r| r.flag() != "ok")
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            s.push_str(&format!("eps = {}: {}", fmt(r.eps), r.flag()));
            match &r.result {
                Ok(x) => s.push_str(&format!(
                    ", lambda/eps^2 = {}, roundness = {}, center drift = {}\n",
                    fmt(x.lambda_ratio()),
                    fmt(x.roundness),
                    fmt(x.center_drift)
                )),
                Err(m) => s.push_str(&format!(", {m}\n")),
            }
        }
        s.push_str(&format!("lambda/eps^2 spread (max/min) = {}\n", fmt(self.lambda_spread())));
        s.push_str(&format!("roundness log-log slope = {}\n", fmt(self.roundness_slope())));
        s.push_str(&format!("diagnostic flag raised = {}\n", self.flagged()));
        s
    }
}

/// Solves every sweep value in order; a failed row does not stop the study.
pub fn study(cfg: &Config) -> Study {
    let rows = cfg
        .sweep
        .values()
        .into_iter()
        .map(|eps| Row { eps, result: solve_at(cfg, eps).map(|(_, s)| s).map_err(|e| e.to_string()) })
        .collect();
    Study { rows }
}

/// Writes `study.csv` and `report.txt`. Fails only when every row failed.
pub fn run(cfg: &Config, out: &Output) -> Result<Study, LabError> {
    let st = study(cfg);
    out.write("study.csv", &format!("{}{}", out.header("scaling"), st.csv_body()))?;
    out.write("report.txt", &format!("{}{}", out.header("scaling"), st.summary()))?;
    if st.rows.iter().all(|r| r.result.is_err()) {
        return Err(LabError::StudyFailed(st.rows.len()));
    }
    Ok(st)
}
