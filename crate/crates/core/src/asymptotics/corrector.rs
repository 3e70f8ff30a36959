//! The explicit `ε²` corrector of the round sphere and the expanded
//! equation it solves.

use super::omega::{chart_sign, omega_chart, ric_base, Coefficients};
use crate::background::{CurvatureBackground, MetricJet, Order};
use crate::immersion::{local_geometry, Chart, ChartGrid, DiscreteImmersion, Jet2, ScalarField};
use crate::jet::Jet;
use crate::real::{quad, Real, V3};
use rayon::prelude::*;

const SERIES_BELOW: f64 = 1e-4;

/// `f(r) = (r² ln(r²/(1+r²)) − 1 − ln(1+r²)) / (1+r²)`.
pub fn f_of_r(r: f64) -> f64 {
    let s = r * r;
    if r < SERIES_BELOW {
        if s == 0.0 {
            return -1.0;
        }
        let l = s.ln();
        return -1.0 + s * l - s * s * l - 0.5 * s * s;
    }
    (s * (s / (1.0 + s)).ln() - 1.0 - s.ln_1p()) / (1.0 + s)
}

/// `f` as a function of `s = r²`, for jets. Singular at `s = 0`.
pub fn f_of_s<T: Real>(s: T) -> T {
    let one = s + 1.0;
    (s * (s / one).ln() - 1.0 - one.ln()) / one
}

/// `f` at `r² = 1/q`, written without overflow for the south chart.
pub fn f_of_s_south<T: Real>(q: T) -> T {
    let one = q + 1.0;
    (q * q.ln() - one * one.ln() - q) / one
}

/// `ρ = Ric ω / 6 + (λ/ε² − Scal/3) f(r) ω`, the second term present only
/// when a multiplier ratio is given.
pub fn corrector<T: Real>(bg: &CurvatureBackground, lambda_ratio: Option<f64>, c: Chart, x: T, y: T) -> V3<T> {
    let w = c.to_sphere_generic(x, y);
    let mut rho = [T::cst(0.0); 3];
    for (a, r) in rho.iter_mut().enumerate() {
        for (b, wb) in w.iter().enumerate() {
            *r = *r + *wb * (bg.ric[a][b] / 6.0);
        }
    }
    if let Some(ratio) = lambda_ratio {
        let k = ratio - bg.scal / 3.0;
        if k != 0.0 {
            let q = x * x + y * y;
            // r is the north-chart radius
            let f = match c {
                Chart::North => f_of_s(q),
                Chart::South => f_of_s_south(q),
            } * k;
            for a in 0..3 {
                rho[a] = rho[a] + f * w[a];
            }
        }
    }
    rho
}

/// Pointwise corrector in north-chart coordinates.
pub fn corrector_at(bg: &CurvatureBackground, lambda_ratio: Option<f64>, z: [f64; 2]) -> [f64; 3] {
    let w = Chart::North.to_sphere(z);
    let mut rho = [0.0; 3];
    for a in 0..3 {
        rho[a] = (0..3).map(|b| bg.ric[a][b] * w[b]).sum::<f64>() / 6.0;
    }
    if let Some(ratio) = lambda_ratio {
        let f = (ratio - bg.scal / 3.0) * f_of_r((z[0] * z[0] + z[1] * z[1]).sqrt());
        for a in 0..3 {
            rho[a] += f * w[a];
        }
    }
    rho
}

/// The approximate solution `Ω = ω + ε² ρ`.
#[derive(Clone, Debug)]
pub struct CorrectorAnsatz {
    pub bg: CurvatureBackground,
    pub eps: f64,
    pub lambda_ratio: Option<f64>,
}

impl CorrectorAnsatz {
    pub fn new(bg: CurvatureBackground, eps: f64, lambda_ratio: Option<f64>) -> Self {
        CorrectorAnsatz { bg, eps, lambda_ratio }
    }

    pub fn metric(&self) -> MetricJet {
        MetricJet::new(self.bg.clone(), self.eps, Order::Three)
    }

    /// The multiplier `λ = ε² · ratio`, with `Scal/3` when no ratio is given
    /// (the value for which the pure curvature corrector balances).
    pub fn lambda(&self) -> f64 {
        self.eps * self.eps * self.lambda_ratio.unwrap_or(self.bg.scal / 3.0)
    }

    pub fn eval<T: Real>(&self, c: Chart, x: T, y: T) -> V3<T> {
        let w = c.to_sphere_generic(x, y);
        let rho = corrector(&self.bg, self.lambda_ratio, c, x, y);
        let e2 = self.eps * self.eps;
        [w[0] + rho[0] * e2, w[1] + rho[1] * e2, w[2] + rho[2] * e2]
    }

    pub fn jets(&self, c: Chart, z: [f64; 2]) -> [Jet; 3] {
        self.eval(c, Jet::var_x(z[0]), Jet::var_y(z[1]))
    }

    pub fn immersion(&self, n: usize) -> DiscreteImmersion {
        DiscreteImmersion::from_chart_map(n, |c, z| {
            if z == [0.0, 0.0] {
                // f is continuous at the poles; use its limits
                let w = c.to_sphere(z);
                let rho = match c {
                    Chart::North => corrector_at(&self.bg, self.lambda_ratio, z),
                    Chart::South => corrector(&self.bg, None, c, 0.0, 0.0),
                };
                let e2 = self.eps * self.eps;
                return [w[0] + e2 * rho[0], w[1] + e2 * rho[1], w[2] + e2 * rho[2]];
            }
            self.eval(c, z[0], z[1])
        })
    }

    /// The expanded equation evaluated with exact derivatives at `z`:
    /// `Δh0 + ε²Δ(h0 S + G) + (|∇Φ|²_g/2) H|A°|² + (ε²/2)(ΔΦ·ν) Ric(ν,ν) − (λ/2) ΔΦ·ν`.
    pub fn expanded_residual_at(
        &self,
        coef: &Coefficients,
        jet: &MetricJet,
        lambda: f64,
        c: Chart,
        z: [f64; 2],
    ) -> f64 {
        let sigma = chart_sign(c);
        let phi = self.jets(c, z);
        let lifted = Jet2::lift(&phi);
        let e = coef.expand(&lifted, sigma);
        let corr = e.h0 * e.s + e.g2;
        let exact = local_geometry(jet, sigma, &Jet2::from_jets(&phi));
        let e2 = self.eps * self.eps;
        let nu = [e.nu[0].deriv(0, 0), e.nu[1].deriv(0, 0), e.nu[2].deriv(0, 0)];
        let lap_nu = e.lap_nu.deriv(0, 0);
        e.h0.laplacian()
            + e2 * corr.laplacian()
            + 0.5 * exact.grad2 * exact.h * exact.a0sq
            + 0.5 * e2 * lap_nu * ric_base(&self.bg, &nu)
            - 0.5 * lambda * lap_nu
    }

    /// `expanded_residual_at` on every node of both charts with `|z| ≤ radius`;
    /// other nodes hold NaN.
    pub fn expanded_residual(&self, n: usize, lambda: f64, radius: f64) -> ScalarField {
        let coef = Coefficients::new(&self.bg);
        let jet = self.metric();
        self.node_field(n, radius, |c, z| self.expanded_residual_at(&coef, &jet, lambda, c, z))
    }

    /// `(g(Ω_x,Ω_x) − g(Ω_y,Ω_y), g(Ω_x,Ω_y))` with exact derivatives.
    pub fn conformality_defect_at(&self, jet: &MetricJet, c: Chart, z: [f64; 2]) -> (f64, f64) {
        let p = Jet2::from_jets(&self.jets(c, z));
        let g = jet.metric(&p.phi);
        (quad(&g, &p.x, &p.x) - quad(&g, &p.y, &p.y), quad(&g, &p.x, &p.y))
    }

    pub fn conformality_defect(&self, n: usize, radius: f64) -> (ScalarField, ScalarField) {
        let jet = self.metric();
        let a = self.node_field(n, radius, |c, z| self.conformality_defect_at(&jet, c, z).0);
        let b = self.node_field(n, radius, |c, z| self.conformality_defect_at(&jet, c, z).1);
        (a, b)
    }

    fn node_field(&self, n: usize, radius: f64, f: impl Fn(Chart, [f64; 2]) -> f64 + Sync) -> ScalarField {
        let g = ChartGrid::new(n);
        let per = |c: Chart| -> Vec<f64> {
            (0..g.len())
                .into_par_iter()
                .map(|k| {
                    let z = g.z(k);
                    if z[0] * z[0] + z[1] * z[1] <= radius * radius {
                        f(c, z)
                    } else {
                        f64::NAN
                    }
                })
                .collect()
        };
        ScalarField::new(g, per(Chart::North), per(Chart::South))
    }
}

/// Conformality defect of a chart jet at one point.
pub fn jet_conformality(jet: &MetricJet, phi: &[Jet; 3]) -> (f64, f64) {
    let p = Jet2::from_jets(phi);
    let g = jet.metric(&p.phi);
    (quad(&g, &p.x, &p.x) - quad(&g, &p.y, &p.y), quad(&g, &p.x, &p.y))
}

/// Unit-sphere jets of either chart, used by callers that need `ω` on the
/// south chart.
pub fn sphere_jets(c: Chart, z: [f64; 2]) -> [Jet; 3] {
    omega_chart(c, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_values() {
        assert_eq!(f_of_r(0.0), -1.0);
        assert!((f_of_r(1.0) + (1.0 + 2.0 * 2f64.ln()) / 2.0).abs() < 1e-15);
        let r = 1e3;
        let asym = -(2.0 + (1.0 + r * r).ln()) / (1.0 + r * r);
        assert!((f_of_r(r) - asym).abs() < 1e-6 * asym.abs());
        assert!(f_of_r(r) < 0.0);
        // the series and the closed form meet at the switch
        let a = f_of_r(SERIES_BELOW * (1.0 - 1e-12));
        let b = f_of_r(SERIES_BELOW * (1.0 + 1e-12));
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn corrector_examples() {
        let flat = CurvatureBackground::flat();
        assert_eq!(corrector_at(&flat, Some(0.0), [0.3, 0.4]), [0.0; 3]);
        let sf = CurvatureBackground::space_form(1.0);
        let z = [0.3, -0.8];
        let w = Chart::North.to_sphere(z);
        let rho = corrector_at(&sf, None, z);
        for a in 0..3 {
            assert!((rho[a] - w[a] / 3.0).abs() < 1e-15);
        }
        let g: V3<f64> = corrector(&sf, Some(1.0), Chart::North, z[0], z[1]);
        let d = corrector_at(&sf, Some(1.0), z);
        for a in 0..3 {
            assert!((g[a] - d[a]).abs() < 1e-15);
        }
    }

    #[test]
    fn ansatz_at_zero_eps_is_omega() {
        let a = CorrectorAnsatz::new(CurvatureBackground::space_form(1.0), 0.0, Some(0.4));
        let im = a.immersion(16);
        let w = DiscreteImmersion::from_chart_map(16, |c, z| c.to_sphere(z));
        assert_eq!(im, w);
        // the f term is singular at the poles, so check the pure curvature part
        let a = CorrectorAnsatz::new(CurvatureBackground::space_form(1.0), 0.0, None);
        let r = a.expanded_residual(16, 0.0, 1.0);
        assert!(r.sup_in_disk(1.0, "expanded residual").unwrap() < 1e-12);
    }
}
