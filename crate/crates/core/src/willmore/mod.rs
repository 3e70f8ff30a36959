//! The area-constrained Willmore residual in direct and divergence form,
//! Lagrange multiplier estimators and the Hawking mass.

use crate::background::MetricJet;
use crate::error::{Error, Result};
use crate::immersion::{conformality_fields, geometry, Chart, DiscreteImmersion, GeometryField, ScalarField};
use crate::real::{add, cross, dot, mat_vec, quad, scale, sub, V3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// How `Δ_ḡ` is discretized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Laplacian {
    /// `ḡ^{ij}(∂_i∂_j − Γ̄^k_{ij}∂_k)`, valid for any parametrization.
    #[default]
    Full,
    /// `(2/|∇Φ|²_g) Δ_flat`, exact only for conformal parametrizations.
    Conformal,
}

/// Relative conformality threshold for the divergence form.
pub const CONFORMALITY_THRESHOLD: f64 = 1e-3;

/// `Δ_ḡH + H|A°|² + H Ric(n,n) − λH` on every node.
pub fn residual_direct(im: &DiscreteImmersion, jet: &MetricJet, lambda: f64) -> Result<ScalarField> {
    residual_direct_with(im, jet, lambda, Laplacian::Full)
}

pub fn residual_direct_with(
    im: &DiscreteImmersion,
    jet: &MetricJet,
    lambda: f64,
    lap: Laplacian,
) -> Result<ScalarField> {
    residual_from_geometry(&geometry(im, jet)?, lambda, lap)
}

/// The direct residual from an already computed geometry.
pub fn residual_from_geometry(gf: &GeometryField, lambda: f64, lap: Laplacian) -> Result<ScalarField> {
    let st = gf.stencil()?;
    let g = gf.grid;
    let mut out: [Vec<f64>; 2] = Default::default();
    for c in Chart::BOTH {
        let pts = gf.chart(c);
        let h: Vec<f64> = pts.iter().map(|p| p.h).collect();
        let hx = st.dx(&g, &h);
        let hy = st.dy(&g, &h);
        let (hxx, hyy) = (st.dxx(&g, &h), st.dyy(&g, &h));
        let hxy = st.dy(&g, &hx);
        out[c.id()] = (0..pts.len())
            .into_par_iter()
            .map(|k| {
                let p = &pts[k];
                let lb = match lap {
                    Laplacian::Conformal => 2.0 / p.grad2 * (hxx[k] + hyy[k]),
                    Laplacian::Full => {
                        let d1 = [hx[k], hy[k]];
                        let d2 = [[hxx[k], hxy[k]], [hxy[k], hyy[k]]];
                        let mut s = 0.0;
                        for i in 0..2 {
                            for j in 0..2 {
                                let t = d2[i][j] - p.cbar[0][i][j] * d1[0] - p.cbar[1][i][j] * d1[1];
                                s += p.gbar_inv[i][j] * t;
                            }
                        }
                        s
                    }
                };
                lb + p.h * p.a0sq + p.h * p.ric_nn - lambda * p.h
            })
            .collect();
    }
    let [n, s] = out;
    Ok(ScalarField::new(g, n, s))
}

fn gamma(chr: &[[[f64; 3]; 3]; 3], u: &V3<f64>, v: &V3<f64>) -> V3<f64> {
    [quad(&chr[0], u, v), quad(&chr[1], u, v), quad(&chr[2], u, v)]
}

/// The metric Hodge star of `a ∧ b`, a vector.
fn star(jet: &MetricJet, y: &V3<f64>, a: &V3<f64>, b: &V3<f64>) -> V3<f64> {
    let m = jet.metric(y);
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    scale(&mat_vec(&jet.inverse_metric(y), &cross(a, b)), det.sqrt())
}

/// Sup of `max(|E − G|, 2|F|)` over the unit disks and the mean of
/// `|∇Φ|²_g` there.
pub fn conformality_measure(im: &DiscreteImmersion, jet: &MetricJet) -> Result<(f64, f64)> {
    let [d1, d2, gr] = conformality_fields(im, jet)?;
    let mut sup: f64 = 0.0;
    let (mut sum, mut cnt) = (0.0, 0usize);
    for c in Chart::BOTH {
        for k in 0..gr.grid.len() {
            let z = gr.grid.z(k);
            if z[0] * z[0] + z[1] * z[1] <= 1.0 {
                sup = sup.max(d1.chart(c)[k].abs()).max(2.0 * d2.chart(c)[k].abs());
                sum += gr.chart(c)[k];
                cnt += 1;
            }
        }
    }
    Ok((sup, sum / cnt as f64))
}

/// The residual assembled from `D*[∇H n − (H/2)Dn + (H/2)⋆(n ∧ D^⊥n)]`
/// projected on the normal, plus the Ricci and multiplier terms. Requires an
/// approximately conformal parametrization.
pub fn residual_divergence(im: &DiscreteImmersion, jet: &MetricJet, lambda: f64) -> Result<ScalarField> {
    let (defect, mean) = conformality_measure(im, jet)?;
    let threshold = CONFORMALITY_THRESHOLD * mean;
    if !(defect <= threshold) {
        return Err(Error::NotConformal { defect, threshold });
    }
    let gf = geometry(im, jet)?;
    let st = gf.stencil()?;
    let g = gf.grid;
    let mut out: [Vec<f64>; 2] = Default::default();
    for c in Chart::BOTH {
        let sigma = gf.sigma[c.id()];
        let pts = gf.chart(c);
        let hc: Vec<f64> = pts.iter().map(|p| sigma * p.h).collect();
        let nc: Vec<V3<f64>> = pts.iter().map(|p| scale(&p.normal, sigma)).collect();
        let comp = |v: &[V3<f64>], a: usize| -> Vec<f64> { v.iter().map(|p| p[a]).collect() };
        let hx = st.dx(&g, &hc);
        let hy = st.dy(&g, &hc);
        let ndx = [0, 1, 2].map(|a| st.dx(&g, &comp(&nc, a)));
        let ndy = [0, 1, 2].map(|a| st.dy(&g, &comp(&nc, a)));
        let fields: Vec<(V3<f64>, V3<f64>)> = (0..pts.len())
            .into_par_iter()
            .map(|k| {
                let p = &pts[k];
                let chr = jet.christoffel(&p.phi);
                let n = nc[k];
                let d1n = add(&[ndx[0][k], ndx[1][k], ndx[2][k]], &gamma(&chr, &p.tangents[0], &n));
                let d2n = add(&[ndy[0][k], ndy[1][k], ndy[2][k]], &gamma(&chr, &p.tangents[1], &n));
                let half = 0.5 * hc[k];
                let v1 = sub(&sub(&scale(&n, hx[k]), &scale(&d1n, half)), &scale(&star(jet, &p.phi, &n, &d2n), half));
                let v2 = add(&sub(&scale(&n, hy[k]), &scale(&d2n, half)), &scale(&star(jet, &p.phi, &n, &d1n), half));
                (v1, v2)
            })
            .collect();
        let v1x = [0, 1, 2].map(|a| st.dx(&g, &fields.iter().map(|f| f.0[a]).collect::<Vec<_>>()));
        let v2y = [0, 1, 2].map(|a| st.dy(&g, &fields.iter().map(|f| f.1[a]).collect::<Vec<_>>()));
        out[c.id()] = (0..pts.len())
            .into_par_iter()
            .map(|k| {
                let p = &pts[k];
                let chr = jet.christoffel(&p.phi);
                let dv = add(
                    &add(&[v1x[0][k], v1x[1][k], v1x[2][k]], &gamma(&chr, &p.tangents[0], &fields[k].0)),
                    &add(&[v2y[0][k], v2y[1][k], v2y[2][k]], &gamma(&chr, &p.tangents[1], &fields[k].1)),
                );
                let normal = dot(&dv, &scale(&p.normal_cov, sigma)) / p.dvol;
                sigma * (normal + hc[k] * p.ric_nn - lambda * hc[k])
            })
            .collect();
    }
    let [n, s] = out;
    Ok(ScalarField::new(g, n, s))
}

/// Lagrange multiplier estimates for an approximate critical point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaEstimate {
    /// `δ_x W / δ_x Area` with the position field `x`.
    pub lambda_dilation: f64,
    /// `⟨residual(λ = 0), H⟩ / ⟨H, H⟩` in `L²(dvol)`.
    pub lambda_projection: f64,
    pub delta_w: f64,
    pub delta_area: f64,
}

impl LambdaEstimate {
    /// The dilation estimate converted to the multiplier of the strong
    /// equation `… = λH`, for which `δ_x W = −(λ/2) δ_x Area`.
    pub fn lambda_dilation_strong(&self) -> f64 {
        -2.0 * self.lambda_dilation
    }
}

pub fn lambda_estimate(im: &DiscreteImmersion, jet: &MetricJet) -> Result<LambdaEstimate> {
    let gf = geometry(im, jet)?;
    lambda_from_geometry(&gf, jet)
}

pub fn lambda_from_geometry(gf: &GeometryField, jet: &MetricJet) -> Result<LambdaEstimate> {
    let w0 = residual_from_geometry(gf, 0.0, Laplacian::Full)?;
    let hh = gf.integrate("mean curvature", |_, _, p| p.h * p.h)?;
    if !(hh.abs() > 1e-300) {
        return Err(Error::DegenerateProjection(hh));
    }
    let wh = gf.integrate("willmore residual", |c, k, p| w0.chart(c)[k] * p.h)?;
    let delta_w = gf.integrate("willmore residual", |c, k, p| w0.chart(c)[k] * dot(&p.phi, &p.normal_cov))?;
    let delta_area = gf.integrate("area density", |_, _, p| {
        let chr = jet.christoffel(&p.phi);
        let m = jet.metric(&p.phi);
        let mut s = 0.0;
        for i in 0..2 {
            let dx = add(&p.tangents[i], &gamma(&chr, &p.tangents[i], &p.phi));
            for j in 0..2 {
                s += p.gbar_inv[i][j] * quad(&m, &dx, &p.tangents[j]);
            }
        }
        s
    })?;
    Ok(LambdaEstimate { lambda_dilation: delta_w / delta_area, lambda_projection: wh / hh, delta_w, delta_area })
}

/// Normalization of the Hawking mass prefactor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HawkingConvention {
    /// `Area / (16 π^{3/2})`.
    Area,
    /// `√Area / (16 π^{3/2})`, the dimensionally standard choice.
    SqrtArea,
}

pub fn hawking_mass_from(area: f64, willmore: f64, conv: HawkingConvention) -> f64 {
    let pre = match conv {
        HawkingConvention::Area => area,
        HawkingConvention::SqrtArea => area.sqrt(),
    };
    pre / (16.0 * PI.powf(1.5)) * (4.0 * PI - willmore)
}

pub fn hawking_mass(im: &DiscreteImmersion, jet: &MetricJet, conv: HawkingConvention) -> Result<f64> {
    let gf = geometry(im, jet)?;
    Ok(hawking_mass_from(gf.area()?, gf.willmore_energy()?, conv))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hawking_arithmetic() {
        let m = hawking_mass_from(4.0 * PI, 2.0 * PI, HawkingConvention::Area);
        // 4π · 2π / (16 π^{3/2}) = √π / 2
        assert!((m - PI.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(hawking_mass_from(3.0, 4.0 * PI, HawkingConvention::SqrtArea), 0.0);
    }

    #[test]
    fn round_sphere_residual_is_minus_lambda_over_r() {
        let jet = MetricJet::flat();
        let im = DiscreteImmersion::round_sphere(64, 2.0, [0.1, 0.0, -0.2]);
        let r = residual_direct(&im, &jet, 0.7).unwrap();
        let shifted: Vec<Vec<f64>> = r.values.iter().map(|v| v.iter().map(|x| x + 0.35).collect()).collect();
        let f = ScalarField::new(r.grid, shifted[0].clone(), shifted[1].clone());
        assert!(f.sup_in_disk(1.0, "residual").unwrap() < 1e-5);
    }

    #[test]
    fn dilation_area_variation_is_twice_the_area() {
        let jet = MetricJet::flat();
        let im = DiscreteImmersion::round_sphere(64, 1.3, [0.0; 3]);
        let gf = geometry(&im, &jet).unwrap();
        let est = lambda_from_geometry(&gf, &jet).unwrap();
        assert!((est.delta_area - 2.0 * gf.area().unwrap()).abs() < 1e-9);
        assert!(est.lambda_projection.abs() < 1e-4);
    }

    #[test]
    fn non_conformal_map_is_refused() {
        let im = DiscreteImmersion::from_sphere_map(32, |p| [p[0], 1.5 * p[1], p[2]]);
        assert!(matches!(residual_divergence(&im, &MetricJet::flat(), 0.0), Err(Error::NotConformal { .. })));
    }
}
