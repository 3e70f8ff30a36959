//! Shared oracle constructions for the integration tests.
#![allow(dead_code)]

use rand::Rng;
use willmore_core::immersion::DiscreteImmersion;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Conformally parametrized surface of revolution `((1+tG)p₁, (1+tG)p₂, h)`
/// with `G = G(p₃)` a polynomial and `h' = √P`; exactly conformal for the
/// flat metric in any chart of the sphere.
#[derive(Clone, Debug)]
pub struct RevolutionSurface {
    pub t: f64,
    /// Coefficients of `G` in powers of `τ = p₃`.
    pub g: Vec<f64>,
    pub rotation: [[f64; 3]; 3],
    gl: Vec<(f64, f64)>,
}

impl RevolutionSurface {
    pub fn new(t: f64, g: Vec<f64>, rotation: [[f64; 3]; 3]) -> Self {
        RevolutionSurface { t, g, rotation, gl: gauss_legendre(40) }
    }

    pub fn random(rng: &mut impl Rng, t: f64) -> Self {
        let g: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let axis = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let angle = rng.gen_range(0.0..std::f64::consts::PI);
        Self::new(t, g, rotation(axis, angle))
    }

    fn big_g(&self, tau: f64) -> (f64, f64) {
        let (mut v, mut d) = (0.0, 0.0);
        for (k, c) in self.g.iter().enumerate().rev() {
            d = d * tau + v;
            v = v * tau + c;
            let _ = k;
        }
        (v, d)
    }

    fn p(&self, tau: f64) -> f64 {
        let (g, dg) = self.big_g(tau);
        let a = 1.0 + self.t * g;
        let b = self.t * dg;
        a * a + 2.0 * tau * a * b - b * b * (1.0 - tau * tau)
    }

    fn height(&self, tau: f64) -> f64 {
        let half = 0.5 * (tau + 1.0);
        self.gl.iter().map(|(x, w)| w * half * self.p(-1.0 + half * (x + 1.0)).sqrt()).sum::<f64>() - 1.0
    }

    pub fn at(&self, q: [f64; 3]) -> [f64; 3] {
        let r = &self.rotation;
        let p = [0, 1, 2].map(|a| r[a][0] * q[0] + r[a][1] * q[1] + r[a][2] * q[2]);
        let (g, _) = self.big_g(p[2]);
        let s = 1.0 + self.t * g;
        [s * p[0], s * p[1], self.height(p[2])]
    }

    pub fn immersion(&self, n: usize) -> DiscreteImmersion {
        DiscreteImmersion::from_sphere_map(n, |q| self.at(q))
    }
}

pub fn rotation(axis: [f64; 3], angle: f64) -> [[f64; 3]; 3] {
    let l = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let [x, y, z] = axis.map(|v| v / l);
    let (s, c) = angle.sin_cos();
    let k = 1.0 - c;
    [
        [c + x * x * k, x * y * k - z * s, x * z * k + y * s],
        [y * x * k + z * s, c + y * y * k, y * z * k - x * s],
        [z * x * k - y * s, z * y * k + x * s, c + z * z * k],
    ]
}

/// Mean curvature (inward normal, sphere positive) and `2πρ|γ'|` of a
/// surface of revolution with profile `γ = (ρ, z)` and its first two
/// derivatives.
pub fn revolution_curvature(rho: [f64; 3], z: [f64; 3]) -> (f64, f64) {
    let s = (rho[1] * rho[1] + z[1] * z[1]).sqrt();
    let k1 = -(rho[1] * z[2] - z[1] * rho[2]) / (s * s * s);
    let k2 = -z[1] / (rho[0] * s);
    (0.5 * (k1 + k2), 2.0 * std::f64::consts::PI * rho[0] * s)
}

/// `∫ H² dA` of a profile over `t ∈ [0, π]` by Gauss–Legendre quadrature.
pub fn revolution_willmore(m: usize, profile: impl Fn(f64) -> ([f64; 3], [f64; 3])) -> f64 {
    let pi = std::f64::consts::PI;
    gauss_legendre(m)
        .into_iter()
        .map(|(x, w)| {
            let t = 0.5 * pi * (x + 1.0);
            let (r, z) = profile(t);
            let (h, da) = revolution_curvature(r, z);
            0.5 * pi * w * h * h * da
        })
        .sum()
}
