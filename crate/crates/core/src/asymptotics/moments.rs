//! Fourth moments of the unit sphere and the contraction that turns the
//! `ε³` balance into a condition on `∇Scal`.

use crate::background::CurvatureBackground;
use crate::immersion::{quadrature_weights, Blend, Chart, ChartGrid};
use std::f64::consts::PI;

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// `∫_{S²} y^α y^β y^γ y^μ = (4π/15)(δ^{αβ}δ^{γμ} + δ^{αμ}δ^{βγ} + δ^{αγ}δ^{βμ})`.
pub fn moment_fourth(a: usize, b: usize, c: usize, m: usize) -> f64 {
    4.0 * PI / 15.0 * (delta(a, b) * delta(c, m) + delta(a, m) * delta(b, c) + delta(a, c) * delta(b, m))
}

/// All 81 fourth moments by two-chart trapezoidal quadrature, indexed
/// `[a][b][c][m]`.
pub fn moment_fourth_quadrature(n: usize) -> [[[[f64; 3]; 3]; 3]; 3] {
    let g = ChartGrid::new(n);
    let blend = Blend::default();
    let mut out = [[[[0.0; 3]; 3]; 3]; 3];
    for c in Chart::BOTH {
        let w = quadrature_weights(&g, &blend, c);
        for (k, wk) in w.iter().enumerate() {
            if *wk == 0.0 {
                continue;
            }
            let z = g.z(k);
            let r2 = z[0] * z[0] + z[1] * z[1];
            let da = wk * 4.0 / ((1.0 + r2) * (1.0 + r2));
            let y = c.to_sphere(z);
            for a in 0..3 {
                for b in 0..3 {
                    for cc in 0..3 {
                        for m in 0..3 {
                            out[a][b][cc][m] += da * y[a] * y[b] * y[cc] * y[m];
                        }
                    }
                }
            }
        }
    }
    out
}

/// Outcome of the moment contraction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentReport {
    /// `∫ Ric_{αβ,γ} y^α y^β y^γ y^μ` through the moment formula.
    pub moment_route: [f64; 3],
    /// `(8π/15) ∇Scal`, the value forced by the contracted Bianchi identity.
    pub trace_route: [f64; 3],
    /// `∇Scal` from the trace of `dric`.
    pub scal_gradient: [f64; 3],
    /// `max |moment_route − trace_route| / (8π/15)`.
    pub defect: f64,
    /// `max |div Ric − ∇Scal/2|` of the input.
    pub bianchi_violation: f64,
}

impl MomentReport {
    pub fn consistent(&self, tol: f64) -> bool {
        self.defect <= tol
    }
}

pub fn scal_gradient_from_moments(bg: &CurvatureBackground) -> MomentReport {
    let mut moment_route = [0.0; 3];
    for (m, v) in moment_route.iter_mut().enumerate() {
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    *v += bg.dric[a][b][c] * moment_fourth(a, b, c, m);
                }
            }
        }
    }
    let k = 8.0 * PI / 15.0;
    let trace_route = [k * bg.dscal[0], k * bg.dscal[1], k * bg.dscal[2]];
    let defect = (0..3).map(|m| (moment_route[m] - trace_route[m]).abs()).fold(0.0, f64::max) / k;
    MomentReport { moment_route, trace_route, scal_gradient: bg.dscal, defect, bianchi_violation: bg.bianchi_defect() }
}
