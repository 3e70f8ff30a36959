//! The round sphere `ω` in stereographic coordinates and the ε-expansion of
//! the mean curvature about it.

use crate::background::{CurvatureBackground, MetricJet, Order};
use crate::immersion::{Chart, Jet2};
use crate::jet::Jet;
use crate::real::{cross, dot, mat_vec, quad, scale_f, Real, V3};

type M3<T> = [[T; 3]; 3];
type T3<T> = [[[T; 3]; 3]; 3];

/// `ω` as degree-4 jets about `z`, so that all derivatives up to fourth
/// order are exact.
pub fn omega_at(z: [f64; 2]) -> [Jet; 3] {
    omega_chart(Chart::North, z)
}

/// The chart parametrization of the unit sphere as jets.
pub fn omega_chart(c: Chart, z: [f64; 2]) -> [Jet; 3] {
    c.to_sphere_generic(Jet::var_x(z[0]), Jet::var_y(z[1]))
}

/// `|∇ω|² = 8/(1+r²)²`.
pub fn grad_omega_sq(z: [f64; 2]) -> f64 {
    let q = 1.0 + z[0] * z[0] + z[1] * z[1];
    8.0 / (q * q)
}

/// Inward orientation of each chart relative to `Φ_x × Φ_y` for maps close
/// to the chart parametrization of the sphere.
pub fn chart_sign(c: Chart) -> f64 {
    match c {
        Chart::North => 1.0,
        Chart::South => -1.0,
    }
}

/// Pieces of the mean curvature expansion at one point of a conformal map.
#[derive(Clone, Copy, Debug)]
pub struct Expansion<T> {
    /// `ΔΦ · ν`.
    pub lap_nu: T,
    /// `|∇Φ|²`.
    pub grad2: T,
    /// `ΔΦ · ν / |∇Φ|²`, the euclidean mean curvature.
    pub h0: T,
    /// Relative `ε²` correction of the metric normalization.
    pub s: T,
    /// `ε²` Christoffel contribution.
    pub g2: T,
    /// Relative `ε³` correction.
    pub t: T,
    /// `ε³` Christoffel contribution.
    pub g3: T,
    /// Euclidean inward unit normal.
    pub nu: V3<T>,
}

/// Coefficient metrics at unit scale: `g = δ + ε² m2 + ε³ m3` and the
/// matching Christoffel parts.
pub struct Coefficients {
    two: MetricJet,
    full: MetricJet,
}

impl Coefficients {
    pub fn new(bg: &CurvatureBackground) -> Self {
        Coefficients {
            two: MetricJet::new(bg.clone(), 1.0, Order::Two),
            full: MetricJet::new(bg.clone(), 1.0, Order::Three),
        }
    }

    fn parts<T: Real>(&self, y: &V3<T>) -> (M3<T>, M3<T>, T3<T>, T3<T>) {
        let g2 = self.two.metric(y);
        let g3 = self.full.metric(y);
        let c2 = self.two.christoffel(y);
        let c3 = self.full.christoffel(y);
        let mut m2 = g2;
        let mut m3 = g3;
        for a in 0..3 {
            m2[a][a] = m2[a][a] - 1.0;
            for b in 0..3 {
                m3[a][b] = g3[a][b] - g2[a][b];
            }
        }
        let mut k3 = c3;
        for c in 0..3 {
            for a in 0..3 {
                for b in 0..3 {
                    k3[c][a][b] = c3[c][a][b] - c2[c][a][b];
                }
            }
        }
        (m2, m3, c2, k3)
    }

    /// Expansion `H = h0 (1 + ε² s + ε³ t) + ε² g2 + ε³ g3 + O(ε⁴)` for a
    /// conformal map with inward orientation `sigma`.
    pub fn expand<T: Real>(&self, p: &Jet2<T>, sigma: f64) -> Expansion<T> {
        let t = [p.x, p.y];
        let n = cross(&p.x, &p.y);
        let nu = scale_f(&n, sigma);
        let len = dot(&nu, &nu).sqrt();
        let nu = [nu[0] / len, nu[1] / len, nu[2] / len];
        let lap = [p.xx[0] + p.yy[0], p.xx[1] + p.yy[1], p.xx[2] + p.yy[2]];
        let lap_nu = dot(&lap, &nu);
        let grad2 = dot(&t[0], &t[0]) + dot(&t[1], &t[1]);
        let (m2, m3, c2, c3) = self.parts(&p.phi);
        let zero = T::cst(0.0);
        let (mut tm2, mut tm3, mut gm2, mut gm3) = (zero, zero, zero, zero);
        for ti in &t {
            tm2 = tm2 + quad(&m2, ti, ti);
            tm3 = tm3 + quad(&m3, ti, ti);
            for c in 0..3 {
                gm2 = gm2 + quad(&c2[c], ti, ti) * nu[c];
                gm3 = gm3 + quad(&c3[c], ti, ti) * nu[c];
            }
        }
        let inv = grad2.recip();
        Expansion {
            lap_nu,
            grad2,
            h0: lap_nu * inv,
            s: -tm2 * inv + quad(&m2, &nu, &nu) * 0.5,
            g2: gm2 * inv,
            t: -tm3 * inv + quad(&m3, &nu, &nu) * 0.5,
            g3: gm3 * inv,
            nu,
        }
    }
}

/// `ε²` coefficient of the mean curvature of `ω` itself, `S + G`; on the
/// sphere it reduces to `−Ric(ω, ω)/6`.
pub fn s_term(bg: &CurvatureBackground, z: [f64; 2]) -> f64 {
    let e = Coefficients::new(bg).expand(&Jet2::from_jets(&omega_at(z)), 1.0);
    e.h0 * e.s + e.g2
}

/// `ε³` coefficient of the mean curvature of `ω`; vanishes with `∇Ric`.
pub fn t_term(bg: &CurvatureBackground, z: [f64; 2]) -> f64 {
    let e = Coefficients::new(bg).expand(&Jet2::from_jets(&omega_at(z)), 1.0);
    e.h0 * e.t + e.g3
}

/// `Ric(ν, ν)` with the base-point Ricci tensor.
pub fn ric_base<T: Real>(bg: &CurvatureBackground, v: &V3<T>) -> T {
    let r = [
        [T::cst(bg.ric[0][0]), T::cst(bg.ric[0][1]), T::cst(bg.ric[0][2])],
        [T::cst(bg.ric[1][0]), T::cst(bg.ric[1][1]), T::cst(bg.ric[1][2])],
        [T::cst(bg.ric[2][0]), T::cst(bg.ric[2][1]), T::cst(bg.ric[2][2])],
    ];
    dot(v, &mat_vec(&r, v))
}
