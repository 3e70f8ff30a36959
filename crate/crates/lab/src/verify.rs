//! The invariant suite behind `willmore-lab verify`.

use willmore_core::asymptotics::{
    corrector, corrector_rhs, lemma_a1_check, moment_fourth, moment_fourth_quadrature, omega_chart,
    scal_gradient_from_moments, CorrectorAnsatz,
};
use willmore_core::asymptotics::{l_omega_apply_exact_inner, l_omega_apply_grid};
use willmore_core::background::CurvatureBackground;
use willmore_core::fit::{loglog_slope, refinement_order};
use willmore_core::immersion::{Chart, DEFAULT_ORDER};
use willmore_core::jet::Jet;

use crate::config::Config;
use crate::error::LabError;
use crate::output::fmt;

/// Values at or below these levels count as exactly zero in order fits:
/// round-off of pointwise closed forms, and of one stencil Laplacian at the
/// finest grids.
pub const EXACT_FLOOR: f64 = 1e-12;
pub const STENCIL_FLOOR: f64 = 1e-10;
pub const MOMENT_TOL: f64 = 1e-10;
pub const BIANCHI_TOL: f64 = 1e-10;
pub const REFINEMENT_ORDER_MIN: f64 = 3.0;
pub const EPS_ORDER_MIN: f64 = 2.7;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// Measured quantity compared with `threshold`.
    pub value: f64,
    pub threshold: f64,
    /// True when `value` must not exceed `threshold`, false for a lower bound.
    pub upper: bool,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn upper(name: &'static str, value: f64, threshold: f64, detail: String) -> Self {
        Check { name, value, threshold, upper: true, pass: value <= threshold, detail }
    }

    /// Passes when the fitted order reaches `min`, or when every sample is
    /// already at the exact floor.
    fn order(name: &'static str, xs: &[f64], errs: &[f64], slope: f64, min: f64, what: &str, floor: f64) -> Self {
        let exact = errs.iter().all(|e| *e <= floor);
        let mut detail = String::new();
        for (x, e) in xs.iter().zip(errs) {
            detail.push_str(&format!("{what} = {x}: {}\n", fmt(*e)));
        }
        if exact {
            detail.push_str("all samples at the exact floor; no order to fit\n");
        }
        Check { name, value: slope, threshold: min, upper: false, pass: exact || slope >= min, detail }
    }

    pub fn line(&self) -> String {
        let rel = if self.upper { "<=" } else { ">=" };
        format!(
            "{:<28} {:>24} {rel} {:<8.2e} {}",
            self.name,
            fmt(self.value),
            self.threshold,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

pub fn moment_check(cfg: &Config) -> Check {
    let q = moment_fourth_quadrature(cfg.grid.quadrature_n);
    let mut worst: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for m in 0..3 {
                    worst = worst.max((q[a][b][c][m] - moment_fourth(a, b, c, m)).abs());
                }
            }
        }
    }
    Check::upper(
        "moment_quadrature",
        worst,
        MOMENT_TOL,
        format!("81 fourth moments at quadrature n = {}\n", cfg.grid.quadrature_n),
    )
}

pub fn bianchi_check(bg: &CurvatureBackground) -> Check {
    let r = scal_gradient_from_moments(bg);
    let detail = format!(
        "moment route {:?}\ntrace route {:?}\ncontracted Bianchi violation {}\n",
        r.moment_route,
        r.trace_route,
        fmt(r.bianchi_violation)
    );
    Check::upper("bianchi_moment_defect", r.defect, BIANCHI_TOL, detail)
}

/// `‖L_ω(ω^α ω)‖_sup` on `|z| ≤ 1.5` under refinement.
pub fn kernel_order_check(cfg: &Config) -> Result<Check, LabError> {
    let levels = &cfg.grid.levels;
    let mut errs = Vec::with_capacity(levels.len());
    for &n in levels {
        let mut worst: f64 = 0.0;
        for a in 0..3 {
            let f = l_omega_apply_grid(n, DEFAULT_ORDER, |c, z| {
                let w = omega_chart(c, z);
                let v = [w[0].deriv(0, 0), w[1].deriv(0, 0), w[2].deriv(0, 0)];
                v.map(|x| x * v[a])
            })?;
            worst = worst.max(f.sup_in_disk(1.5, "linearized operator")?);
        }
        errs.push(worst);
    }
    let slope = refinement_order(levels, &errs);
    let xs: Vec<f64> = levels.iter().map(|n| *n as f64).collect();
    Ok(Check::order("kernel_refinement_order", &xs, &errs, slope, REFINEMENT_ORDER_MIN, "n", STENCIL_FLOOR))
}

/// `L_ω ρ` against its closed form on the annulus `0.5 ≤ |z| ≤ 1.5` of the
/// north chart, away from the logarithmic poles of `f`. The inner
/// expression uses exact derivatives of `ρ` and the outer Laplacian is a
/// stencil: with both Laplacians nested, round-off reaches the truncation
/// error near n = 128 for this ρ. The multiplier ratio is offset from
/// `Scal/3` so that the logarithmic part of the corrector is exercised.
pub fn corrector_order_check(cfg: &Config, bg: &CurvatureBackground) -> Result<Check, LabError> {
    let levels = &cfg.grid.levels;
    let ratio = bg.scal / 3.0 + 1.0;
    let mut errs = Vec::with_capacity(levels.len());
    for &n in levels {
        let f = l_omega_apply_exact_inner(n, DEFAULT_ORDER, |c, z| {
            corrector(bg, Some(ratio), c, Jet::var_x(z[0]), Jet::var_y(z[1]))
        })?;
        let g = f.grid;
        let mut worst: f64 = 0.0;
        for (k, v) in f.chart(Chart::North).iter().enumerate() {
            let z = g.z(k);
            let r = z[0].hypot(z[1]);
            if (0.5..=1.5).contains(&r) {
                worst = worst.max((v - corrector_rhs(bg, ratio, z)).abs());
            }
        }
        errs.push(worst);
    }
    let slope = refinement_order(levels, &errs);
    let xs: Vec<f64> = levels.iter().map(|n| *n as f64).collect();
    Ok(Check::order("corrector_refinement_order", &xs, &errs, slope, REFINEMENT_ORDER_MIN, "n", STENCIL_FLOOR))
}

pub fn lemma_check(cfg: &Config) -> Result<Check, LabError> {
    let r = lemma_a1_check(cfg.grid.n, DEFAULT_ORDER, cfg.grid.kernel_lmax)?;
    let detail = format!(
        "n = {}, degrees {}..={}\ndiscretization tolerance {}\nspectral gap {}\nsmallest constrained singular value {}\n",
        r.n,
        r.lmin,
        r.lmax,
        fmt(r.tau),
        fmt(r.gap),
        fmt(r.sigma_min)
    );
    Ok(Check {
        name: "kernel_gradient_bound",
        value: r.grad_bound,
        threshold: 10.0 * r.tau,
        upper: true,
        pass: r.passes(),
        detail,
    })
}

/// Sup-norms of the expanded residual and of the conformality defect of
/// the ansatz over the sweep.
pub fn expansion_checks(cfg: &Config, bg: &CurvatureBackground) -> Result<[Check; 2], LabError> {
    let eps = cfg.sweep.values();
    let (mut res, mut conf) = (Vec::new(), Vec::new());
    for &e in &eps {
        let a = CorrectorAnsatz::new(bg.clone(), e, None);
        let f = a.expanded_residual(cfg.grid.n, a.lambda(), cfg.grid.disk_radius);
        res.push(f.sup_in_disk(cfg.grid.disk_radius, "expanded residual")?);
        let (d1, d2) = a.conformality_defect(cfg.grid.n, cfg.grid.disk_radius);
        conf.push(
            d1.sup_in_disk(cfg.grid.disk_radius, "conformality defect")?
                .max(d2.sup_in_disk(cfg.grid.disk_radius, "conformality defect")?),
        );
    }
    Ok([
        Check::order("expansion_eps_order", &eps, &res, loglog_slope(&eps, &res), EPS_ORDER_MIN, "eps", EXACT_FLOOR),
        Check::order(
            "conformality_eps_order",
            &eps,
            &conf,
            loglog_slope(&eps, &conf),
            EPS_ORDER_MIN,
            "eps",
            EXACT_FLOOR,
        ),
    ])
}

/// Runs every check.
pub fn run(cfg: &Config) -> Result<Vec<Check>, LabError> {
    let bg = cfg.background_data()?;
    let mut out = vec![moment_check(cfg), bianchi_check(&bg)];
    out.push(kernel_order_check(cfg)?);
    out.push(corrector_order_check(cfg, &bg)?);
    out.push(lemma_check(cfg)?);
    out.extend(expansion_checks(cfg, &bg)?);
    Ok(out)
}

pub fn report(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        s.push_str(&c.line());
        s.push('\n');
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    s.push_str(&format!("\n{} of {} checks passed\n", checks.len() - failed, checks.len()));
    for c in checks {
        s.push_str(&format!("\n[{}]\n{}", c.name, c.detail));
    }
    s
}
