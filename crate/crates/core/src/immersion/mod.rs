//! Discrete immersions of S² sampled on two stereographic chart grids, and
//! their geometry under a model metric.

pub mod fd;
mod field;
mod geometry;
mod grid;
mod interp;
mod report;
mod snapshot;

pub use field::ScalarField;
pub use geometry::{area_density, local_geometry, Jet2, LocalGeometry};
pub use grid::{transition, Blend, Chart, ChartGrid, HALF_WIDTH};
pub use interp::lagrange_interpolate;
pub use report::{diameter, simon_bounds_check, SimonReport};
pub use snapshot::{read_snapshot, write_snapshot};

use crate::background::MetricJet;
use crate::error::{Error, Result};
use crate::real::{cross, dot, norm, sub};
use fd::{Derivatives, Stencil};
use rayon::prelude::*;

/// Default finite-difference order.
pub const DEFAULT_ORDER: usize = 6;

/// A map `S² → R³` sampled on the north and south chart grids.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteImmersion {
    pub n: usize,
    pub blend: Blend,
    /// Stencil order used when derivatives are taken.
    pub order: usize,
    pub north: Vec<[f64; 3]>,
    pub south: Vec<[f64; 3]>,
}

impl DiscreteImmersion {
    /// Samples `f(chart, z)` at every node of both chart grids.
    pub fn from_chart_map<F>(n: usize, f: F) -> Self
    where
        F: Fn(Chart, [f64; 2]) -> [f64; 3] + Sync,
    {
        let g = ChartGrid::new(n);
        let sample = |c: Chart| (0..g.len()).into_par_iter().map(|k| f(c, g.z(k))).collect();
        DiscreteImmersion {
            n,
            blend: Blend::default(),
            order: DEFAULT_ORDER,
            north: sample(Chart::North),
            south: sample(Chart::South),
        }
    }

    /// Samples `f(p)` with `p` the point of the unit sphere.
    pub fn from_sphere_map<F>(n: usize, f: F) -> Self
    where
        F: Fn([f64; 3]) -> [f64; 3] + Sync,
    {
        Self::from_chart_map(n, |c, z| f(c.to_sphere(z)))
    }

    /// The round sphere of radius `r` about `center`.
    pub fn round_sphere(n: usize, r: f64, center: [f64; 3]) -> Self {
        Self::from_sphere_map(n, |p| [center[0] + r * p[0], center[1] + r * p[1], center[2] + r * p[2]])
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn grid(&self) -> ChartGrid {
        ChartGrid::new(self.n)
    }

    pub fn chart(&self, c: Chart) -> &[[f64; 3]] {
        match c {
            Chart::North => &self.north,
            Chart::South => &self.south,
        }
    }

    pub fn chart_mut(&mut self, c: Chart) -> &mut Vec<[f64; 3]> {
        match c {
            Chart::North => &mut self.north,
            Chart::South => &mut self.south,
        }
    }

    pub fn stencil(&self) -> Result<Stencil> {
        Stencil::new(self.order)
    }

    /// Componentwise derivatives of one chart.
    pub fn derivatives(&self, c: Chart) -> Result<[Derivatives; 3]> {
        let st = self.stencil()?;
        let g = self.grid();
        let data = self.chart(c);
        Ok([0, 1, 2].map(|k| {
            let comp: Vec<f64> = data.iter().map(|p| p[k]).collect();
            Derivatives::of(&st, &g, &comp)
        }))
    }

    /// Evaluates the immersion at a point of the unit sphere by interpolation
    /// in the chart where it lies closer to the center.
    pub fn eval_sphere(&self, p: [f64; 3]) -> [f64; 3] {
        let c = if p[2] <= 0.0 { Chart::North } else { Chart::South };
        lagrange_interpolate(&self.grid(), self.chart(c), c.from_sphere(p))
    }

    /// Largest mismatch between the charts over the overlap
    /// `2/3 ≤ |z| ≤ 3/2`, by interpolating the south data at `z/|z|²`.
    pub fn chart_consistency_defect(&self) -> f64 {
        let g = self.grid();
        (0..g.len())
            .into_par_iter()
            .map(|k| {
                let z = g.z(k);
                let r = (z[0] * z[0] + z[1] * z[1]).sqrt();
                if !(2.0 / 3.0..=1.5).contains(&r) {
                    return 0.0;
                }
                let q = lagrange_interpolate(&g, &self.south, transition(z));
                norm(&sub(&self.north[k], &q))
            })
            .reduce(|| 0.0, f64::max)
    }

    /// Applies `f(chart, z, Φ)` to every sample.
    pub fn map<F>(&self, f: F) -> Self
    where
        F: Fn(Chart, [f64; 2], [f64; 3]) -> [f64; 3] + Sync,
    {
        let g = self.grid();
        let apply = |c: Chart| self.chart(c).par_iter().enumerate().map(|(k, p)| f(c, g.z(k), *p)).collect();
        DiscreteImmersion { north: apply(Chart::North), south: apply(Chart::South), ..self.clone() }
    }

    /// Every sample whose node lies in the unit disk of its chart; together
    /// these cover the sphere.
    pub fn owned_points(&self) -> Vec<[f64; 3]> {
        let g = self.grid();
        let mut out = Vec::new();
        for c in Chart::BOTH {
            for (k, p) in self.chart(c).iter().enumerate() {
                let z = g.z(k);
                if z[0] * z[0] + z[1] * z[1] <= 1.0 {
                    out.push(*p);
                }
            }
        }
        out
    }
}

/// Trapezoid weights times the partition of unity for one chart.
pub fn quadrature_weights(g: &ChartGrid, blend: &Blend, c: Chart) -> Vec<f64> {
    let h2 = g.h() * g.h();
    (0..g.len()).map(|k| blend.weight(c, g.z(k)) * h2).collect()
}

/// Sums `f` against the blended two-chart quadrature; any non-finite value
/// inside the support is a margin failure.
pub fn integrate_charts<F>(g: &ChartGrid, weights: &[Vec<f64>; 2], what: &'static str, f: F) -> Result<f64>
where
    F: Fn(Chart, usize) -> f64 + Sync,
{
    let mut total = 0.0;
    for c in Chart::BOTH {
        let w = &weights[c.id()];
        let parts: Vec<f64> = (0..g.side())
            .into_par_iter()
            .map(|i| {
                let mut acc = 0.0;
                for j in 0..g.side() {
                    let k = g.index(i, j);
                    if w[k] == 0.0 {
                        continue;
                    }
                    let v = f(c, k);
                    if !v.is_finite() {
                        return f64::NAN;
                    }
                    acc += w[k] * v;
                }
                acc
            })
            .collect();
        for p in parts {
            if !p.is_finite() {
                return Err(Error::Margin { what, n: g.n });
            }
            total += p;
        }
    }
    Ok(total)
}

/// Per-node geometry on both charts with a fixed inward orientation.
#[derive(Clone, Debug)]
pub struct GeometryField {
    pub grid: ChartGrid,
    pub blend: Blend,
    pub order: usize,
    /// Orientation applied on each chart relative to `Φ_x × Φ_y`.
    pub sigma: [f64; 2],
    pub center_of_mass: [f64; 3],
    pub points: [Vec<LocalGeometry<f64>>; 2],
    pub weights: [Vec<f64>; 2],
}

impl GeometryField {
    pub fn chart(&self, c: Chart) -> &[LocalGeometry<f64>] {
        &self.points[c.id()]
    }

    /// `∫ f dvol` over S².
    pub fn integrate<F>(&self, what: &'static str, f: F) -> Result<f64>
    where
        F: Fn(Chart, usize, &LocalGeometry<f64>) -> f64 + Sync,
    {
        integrate_charts(&self.grid, &self.weights, what, |c, k| {
            let p = &self.points[c.id()][k];
            f(c, k, p) * p.dvol
        })
    }

    pub fn area(&self) -> Result<f64> {
        self.integrate("area density", |_, _, _| 1.0)
    }

    pub fn willmore_energy(&self) -> Result<f64> {
        self.integrate("mean curvature", |_, _, p| p.h * p.h)
    }

    pub fn stencil(&self) -> Result<Stencil> {
        Stencil::new(self.order)
    }

    pub fn field(&self, c: Chart, f: impl Fn(&LocalGeometry<f64>) -> f64) -> Vec<f64> {
        self.chart(c).iter().map(f).collect()
    }
}

fn in_support(g: &ChartGrid, blend: &Blend, c: Chart, k: usize) -> bool {
    blend.weight(c, g.z(k)) > 0.0
}

fn chart_geometry(im: &DiscreteImmersion, jet: &MetricJet, c: Chart) -> Result<Vec<LocalGeometry<f64>>> {
    let d = im.derivatives(c)?;
    let data = im.chart(c);
    let pick = |v: [&Vec<f64>; 3], k: usize| [v[0][k], v[1][k], v[2][k]];
    Ok((0..data.len())
        .into_par_iter()
        .map(|k| {
            let p = Jet2 {
                phi: data[k],
                x: pick([&d[0].x, &d[1].x, &d[2].x], k),
                y: pick([&d[0].y, &d[1].y, &d[2].y], k),
                xx: pick([&d[0].xx, &d[1].xx, &d[2].xx], k),
                xy: pick([&d[0].xy, &d[1].xy, &d[2].xy], k),
                yy: pick([&d[0].yy, &d[1].yy, &d[2].yy], k),
            };
            local_geometry(jet, 1.0, &p)
        })
        .collect())
}

/// Computes the geometry of `im` under `jet`, orienting the normal toward
/// the center of mass on each chart.
pub fn geometry(im: &DiscreteImmersion, jet: &MetricJet) -> Result<GeometryField> {
    let g = im.grid();
    let mut points = [chart_geometry(im, jet, Chart::North)?, chart_geometry(im, jet, Chart::South)?];
    for c in Chart::BOTH {
        for (k, p) in points[c.id()].iter().enumerate() {
            if in_support(&g, &im.blend, c, k) && p.det.is_finite() && p.det <= 1e-12 * p.grad2 * p.grad2 {
                let (i, j) = g.ij(k);
                return Err(Error::Degenerate { chart: c, i, j, det: p.det });
            }
        }
    }
    let weights = [quadrature_weights(&g, &im.blend, Chart::North), quadrature_weights(&g, &im.blend, Chart::South)];
    let com = {
        let dv = |c: Chart, k: usize| points[c.id()][k].dvol;
        let area = integrate_charts(&g, &weights, "area density", dv)?;
        let mut m = [0.0; 3];
        for (a, v) in m.iter_mut().enumerate() {
            *v = integrate_charts(&g, &weights, "area density", |c, k| dv(c, k) * im.chart(c)[k][a])? / area;
        }
        m
    };
    let mut sigma = [1.0; 2];
    for c in Chart::BOTH {
        let k = g.center();
        let d = im.derivatives(c)?;
        let nu = cross(&[d[0].x[k], d[1].x[k], d[2].x[k]], &[d[0].y[k], d[1].y[k], d[2].y[k]]);
        let to_center = sub(&com, &im.chart(c)[k]);
        let s = dot(&to_center, &nu) / (norm(&nu) * norm(&to_center).max(f64::MIN_POSITIVE));
        if !s.is_finite() || s.abs() < 1e-8 {
            return Err(Error::OrientationAmbiguous { chart: c });
        }
        if s < 0.0 {
            sigma[c.id()] = -1.0;
            points[c.id()].par_iter_mut().for_each(|p| p.reorient());
        }
    }
    Ok(GeometryField { grid: g, blend: im.blend, order: im.order, sigma, center_of_mass: com, points, weights })
}

/// `∫ H² dvol`.
pub fn willmore_energy(im: &DiscreteImmersion, jet: &MetricJet) -> Result<f64> {
    geometry(im, jet)?.willmore_energy()
}

fn first_order_density(im: &DiscreteImmersion, jet: &MetricJet, c: Chart) -> Result<Vec<f64>> {
    let st = im.stencil()?;
    let g = im.grid();
    let data = im.chart(c);
    let comp = |a: usize| -> Vec<f64> { data.iter().map(|p| p[a]).collect() };
    let dx = [0, 1, 2].map(|a| st.dx(&g, &comp(a)));
    let dy = [0, 1, 2].map(|a| st.dy(&g, &comp(a)));
    Ok((0..data.len())
        .into_par_iter()
        .map(|k| area_density(jet, &data[k], &[dx[0][k], dx[1][k], dx[2][k]], &[dy[0][k], dy[1][k], dy[2][k]]))
        .collect())
}

/// Area and center of mass from first derivatives only.
pub fn area_and_center(im: &DiscreteImmersion, jet: &MetricJet) -> Result<(f64, [f64; 3])> {
    let g = im.grid();
    let dens = [first_order_density(im, jet, Chart::North)?, first_order_density(im, jet, Chart::South)?];
    let weights = [quadrature_weights(&g, &im.blend, Chart::North), quadrature_weights(&g, &im.blend, Chart::South)];
    let area = integrate_charts(&g, &weights, "area density", |c, k| dens[c.id()][k])?;
    let mut m = [0.0; 3];
    for (a, v) in m.iter_mut().enumerate() {
        *v = integrate_charts(&g, &weights, "area density", |c, k| dens[c.id()][k] * im.chart(c)[k][a])? / area;
    }
    Ok((area, m))
}

pub fn area(im: &DiscreteImmersion, jet: &MetricJet) -> Result<f64> {
    Ok(area_and_center(im, jet)?.0)
}

/// `∫ Φ dvol / ∫ dvol`.
pub fn center_of_mass(im: &DiscreteImmersion, jet: &MetricJet) -> Result<[f64; 3]> {
    Ok(area_and_center(im, jet)?.1)
}

/// `(g(Φ_x,Φ_x) − g(Φ_y,Φ_y), g(Φ_x,Φ_y))` on both charts, together with
/// `|∇Φ|²_g`.
pub fn conformality_fields(im: &DiscreteImmersion, jet: &MetricJet) -> Result<[ScalarField; 3]> {
    let st = im.stencil()?;
    let g = im.grid();
    let mut out: [[Vec<f64>; 2]; 3] = Default::default();
    for c in Chart::BOTH {
        let data = im.chart(c);
        let comp = |a: usize| -> Vec<f64> { data.iter().map(|p| p[a]).collect() };
        let dx = [0, 1, 2].map(|a| st.dx(&g, &comp(a)));
        let dy = [0, 1, 2].map(|a| st.dy(&g, &comp(a)));
        let vals: Vec<[f64; 3]> = (0..data.len())
            .into_par_iter()
            .map(|k| {
                let m = jet.metric(&data[k]);
                let x = [dx[0][k], dx[1][k], dx[2][k]];
                let y = [dy[0][k], dy[1][k], dy[2][k]];
                let e = crate::real::quad(&m, &x, &x);
                let gg = crate::real::quad(&m, &y, &y);
                [e - gg, crate::real::quad(&m, &x, &y), e + gg]
            })
            .collect();
        for (q, o) in out.iter_mut().enumerate() {
            o[c.id()] = vals.iter().map(|v| v[q]).collect();
        }
    }
    Ok(out.map(|[a, b]| ScalarField::new(g, a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_sphere_area_energy_and_center() {
        let im = DiscreteImmersion::round_sphere(128, 1.0, [0.0; 3]);
        let jet = MetricJet::flat();
        let gf = geometry(&im, &jet).unwrap();
        assert!((gf.area().unwrap() - 4.0 * PI).abs() < 1e-6);
        assert!((gf.willmore_energy().unwrap() - 4.0 * PI).abs() < 1e-6);
        assert_eq!(gf.sigma, [1.0, -1.0]);
        let k = gf.grid.center();
        assert!((gf.chart(Chart::North)[k].h - 1.0).abs() < 1e-7);
    }

    #[test]
    fn translated_sphere_center_is_recovered() {
        let c = [0.3, -1.0, 0.25];
        let im = DiscreteImmersion::round_sphere(96, 1.5, c);
        let m = center_of_mass(&im, &MetricJet::flat()).unwrap();
        for a in 0..3 {
            assert!((m[a] - c[a]).abs() < 1e-6, "{m:?}");
        }
    }

    #[test]
    fn coarse_grid_reports_margin() {
        let im = DiscreteImmersion::round_sphere(8, 1.0, [0.0; 3]);
        assert!(matches!(geometry(&im, &MetricJet::flat()), Err(Error::Margin { .. })));
    }

    #[test]
    fn collapsed_map_is_degenerate() {
        let im = DiscreteImmersion::from_sphere_map(32, |p| [p[0], 0.0, 0.0]);
        assert!(matches!(geometry(&im, &MetricJet::flat()), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn chart_consistency_is_at_interpolation_level() {
        let im = DiscreteImmersion::from_sphere_map(64, |p| [p[0], 1.1 * p[1], p[2] + 0.1 * p[0] * p[2]]);
        assert!(im.chart_consistency_defect() < 1e-7);
    }
}
