//! Pointwise extrinsic geometry of a parametrized surface in the model metric.

use crate::background::MetricJet;
use crate::jet::Jet;
use crate::real::{cross, dot, mat_vec, quad, scale, Real, V3};

/// Position and chart derivatives of a parametrization at one point.
#[derive(Clone, Copy, Debug)]
pub struct Jet2<T> {
    pub phi: V3<T>,
    pub x: V3<T>,
    pub y: V3<T>,
    pub xx: V3<T>,
    pub xy: V3<T>,
    pub yy: V3<T>,
}

impl Jet2<f64> {
    /// Values and derivatives read off closed-form Taylor jets.
    pub fn from_jets(p: &[Jet; 3]) -> Self {
        let e = |i: usize, j: usize| [p[0].deriv(i, j), p[1].deriv(i, j), p[2].deriv(i, j)];
        Jet2 { phi: e(0, 0), x: e(1, 0), y: e(0, 1), xx: e(2, 0), xy: e(1, 1), yy: e(0, 2) }
    }
}

impl Jet2<Jet> {
    /// Jet-valued derivatives, so that derived quantities keep their own
    /// derivatives of total order `degree − 2`.
    pub fn lift(p: &[Jet; 3]) -> Self {
        let d = |f: &dyn Fn(&Jet) -> Jet| [f(&p[0]), f(&p[1]), f(&p[2])];
        Jet2 {
            phi: *p,
            x: d(&|j| j.dx()),
            y: d(&|j| j.dy()),
            xx: d(&|j| j.dx().dx()),
            xy: d(&|j| j.dx().dy()),
            yy: d(&|j| j.dy().dy()),
        }
    }
}

/// First and second fundamental forms and derived scalars at one point.
#[derive(Clone, Copy, Debug)]
pub struct LocalGeometry<T> {
    pub phi: V3<T>,
    pub tangents: [V3<T>; 2],
    pub gbar: [[T; 2]; 2],
    pub gbar_inv: [[T; 2]; 2],
    pub det: T,
    pub dvol: T,
    /// `g`-unit normal.
    pub normal: V3<T>,
    /// `g`-lowered unit normal, so that `g(v, n) = v · normal_cov`.
    pub normal_cov: V3<T>,
    pub a: [[T; 2]; 2],
    pub h: T,
    pub a0sq: T,
    /// `|∇Φ|²_g = trace gbar`.
    pub grad2: T,
    /// `Ric_{g_ε}(n, n)`.
    pub ric_nn: T,
    /// Christoffel symbols of the induced metric, `cbar[k][i][j]`.
    pub cbar: [[[T; 2]; 2]; 2],
}

fn gamma<T: Real>(chr: &[[[T; 3]; 3]; 3], u: &V3<T>, v: &V3<T>) -> V3<T> {
    [quad(&chr[0], u, v), quad(&chr[1], u, v), quad(&chr[2], u, v)]
}

/// Evaluates the local geometry. `sigma = ±1` selects the normal among the
/// two with `sigma = 1` giving the direction of `Φ_x × Φ_y`.
pub fn local_geometry<T: Real>(jet: &MetricJet, sigma: f64, p: &Jet2<T>) -> LocalGeometry<T> {
    let g = jet.metric(&p.phi);
    let ginv = jet.inverse_metric(&p.phi);
    let chr = jet.christoffel(&p.phi);
    let t = [p.x, p.y];
    let gt = [mat_vec(&g, &p.x), mat_vec(&g, &p.y)];
    let gbar = [[dot(&t[0], &gt[0]), dot(&t[0], &gt[1])], [dot(&t[1], &gt[0]), dot(&t[1], &gt[1])]];
    let det = gbar[0][0] * gbar[1][1] - gbar[0][1] * gbar[1][0];
    let idet = det.recip();
    let gbar_inv = [[gbar[1][1] * idet, -gbar[0][1] * idet], [-gbar[1][0] * idet, gbar[0][0] * idet]];

    let nu = cross(&p.x, &p.y);
    let nn = quad(&ginv, &nu, &nu);
    let inv_len = nn.sqrt().recip() * sigma;
    let normal_cov = scale(&nu, inv_len);
    let normal = mat_vec(&ginv, &normal_cov);

    let second = [[p.xx, p.xy], [p.xy, p.yy]];
    let mut cov = [[[T::cst(0.0); 3]; 2]; 2];
    let mut a = [[T::cst(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let gm = gamma(&chr, &t[i], &t[j]);
            cov[i][j] = [second[i][j][0] + gm[0], second[i][j][1] + gm[1], second[i][j][2] + gm[2]];
            a[i][j] = dot(&cov[i][j], &normal_cov);
        }
    }
    let mut tr = T::cst(0.0);
    for i in 0..2 {
        for j in 0..2 {
            tr = tr + gbar_inv[i][j] * a[i][j];
        }
    }
    let h = tr * 0.5;
    let mut a0sq = T::cst(0.0);
    let mut a0 = a;
    for i in 0..2 {
        for j in 0..2 {
            a0[i][j] = a[i][j] - gbar[i][j] * h;
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    a0sq = a0sq + gbar_inv[i][k] * gbar_inv[j][l] * a0[i][j] * a0[k][l];
                }
            }
        }
    }

    let mut cbar = [[[T::cst(0.0); 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let low = [dot(&cov[i][j], &gt[0]), dot(&cov[i][j], &gt[1])];
            for k in 0..2 {
                cbar[k][i][j] = gbar_inv[k][0] * low[0] + gbar_inv[k][1] * low[1];
            }
        }
    }

    let ric = jet.ricci(&p.phi);
    LocalGeometry {
        phi: p.phi,
        tangents: t,
        gbar,
        gbar_inv,
        det,
        dvol: det.sqrt(),
        normal,
        normal_cov,
        a,
        h,
        a0sq,
        grad2: gbar[0][0] + gbar[1][1],
        ric_nn: quad(&ric, &normal, &normal),
        cbar,
    }
}

/// First fundamental form only; enough for area and center of mass.
pub fn area_density<T: Real>(jet: &MetricJet, phi: &V3<T>, x: &V3<T>, y: &V3<T>) -> T {
    let g = jet.metric(phi);
    let gx = mat_vec(&g, x);
    let gy = mat_vec(&g, y);
    let e = dot(x, &gx);
    let f = dot(x, &gy);
    let gg = dot(y, &gy);
    (e * gg - f * f).sqrt()
}

impl LocalGeometry<f64> {
    /// Flips the normal and the quantities odd in it.
    pub fn reorient(&mut self) {
        for k in 0..3 {
            self.normal[k] = -self.normal[k];
            self.normal_cov[k] = -self.normal_cov[k];
        }
        for row in self.a.iter_mut() {
            for v in row.iter_mut() {
                *v = -*v;
            }
        }
        self.h = -self.h;
    }

    pub fn is_finite(&self) -> bool {
        self.h.is_finite() && self.dvol.is_finite() && self.a0sq.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::background::{CurvatureBackground, Order};
    use crate::immersion::Chart;

    fn sphere_jet(r: f64, z: [f64; 2]) -> Jet2<f64> {
        let p = Chart::North.to_sphere_generic(Jet::var_x(z[0]), Jet::var_y(z[1]));
        Jet2::from_jets(&p.map(|c| c * r))
    }

    #[test]
    fn round_sphere_is_umbilic_with_inward_unit_mean_curvature() {
        let jet = MetricJet::flat();
        for r in [1.0, 2.0] {
            let lg = local_geometry(&jet, 1.0, &sphere_jet(r, [0.3, -0.7]));
            assert!((lg.h - 1.0 / r).abs() < 1e-13);
            assert!(lg.a0sq.abs() < 1e-24);
        }
    }

    #[test]
    fn normal_is_metric_unit_and_tangent_orthogonal() {
        let jet = MetricJet::new(CurvatureBackground::space_form(1.0), 0.3, Order::Three);
        let p = sphere_jet(1.0, [0.4, 0.2]);
        let lg = local_geometry(&jet, 1.0, &p);
        assert!((dot(&lg.normal, &lg.normal_cov) - 1.0).abs() < 1e-14);
        assert!(dot(&p.x, &lg.normal_cov).abs() < 1e-14);
        assert!(dot(&p.y, &lg.normal_cov).abs() < 1e-14);
    }
}
