//! Truncated bivariate Taylor polynomials ("jets") in the chart variables.
//!
//! A jet holds the Taylor coefficients of a function of `(x, y)` about a
//! base point up to total degree [`MAX_DEG`]. Arithmetic propagates exact
//! derivatives, so closed-form maps (ω, the corrector, metric polynomials)
//! are differentiated without finite differences. Differentiating a jet
//! lowers its valid degree by one; binary operations keep the smaller one.

use crate::real::Real;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub const MAX_DEG: usize = 4;
const NC: usize = (MAX_DEG + 1) * (MAX_DEG + 2) / 2;

/// Index of the coefficient of `dx^i dy^j`.
const fn idx(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

struct MulTable {
    // (left, right, out, out degree), sorted by out degree
    entries: [(u8, u8, u8, u8); 70],
}

const fn build_table() -> MulTable {
    let mut entries = [(0u8, 0u8, 0u8, 0u8); 70];
    let mut n = 0;
    let mut d = 0;
    while d <= MAX_DEG {
        let mut j = 0;
        while j <= d {
            let i = d - j;
            let mut i1 = 0;
            while i1 <= i {
                let mut j1 = 0;
                while j1 <= j {
                    entries[n] = (idx(i1, j1) as u8, idx(i - i1, j - j1) as u8, idx(i, j) as u8, d as u8);
                    n += 1;
                    j1 += 1;
                }
                i1 += 1;
            }
            j += 1;
        }
        d += 1;
    }
    MulTable { entries }
}

static TABLE: MulTable = build_table();

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [f64; NC],
    deg: u8,
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; NC];
        c[0] = v;
        Jet { c, deg: MAX_DEG as u8 }
    }

    /// The coordinate function `x` expanded about `x0`.
    pub fn var_x(x0: f64) -> Self {
        let mut j = Self::constant(x0);
        j.c[idx(1, 0)] = 1.0;
        j
    }

    /// The coordinate function `y` expanded about `y0`.
    pub fn var_y(y0: f64) -> Self {
        let mut j = Self::constant(y0);
        j.c[idx(0, 1)] = 1.0;
        j
    }

    pub fn degree(&self) -> usize {
        self.deg as usize
    }

    /// Partial derivative `∂x^i ∂y^j` at the base point.
    pub fn deriv(&self, i: usize, j: usize) -> f64 {
        assert!(i + j <= self.degree(), "derivative order exceeds jet degree");
        self.c[idx(i, j)] * factorial(i) * factorial(j)
    }

    pub fn dx(&self) -> Self {
        self.shift(1, 0)
    }

    pub fn dy(&self) -> Self {
        self.shift(0, 1)
    }

    /// Flat Laplacian at the base point.
    pub fn laplacian(&self) -> f64 {
        self.deriv(2, 0) + self.deriv(0, 2)
    }

    fn shift(&self, sx: usize, sy: usize) -> Self {
        assert!(self.deg >= 1, "cannot differentiate a degree-0 jet");
        let deg = self.degree() - 1;
        let mut c = [0.0; NC];
        for d in 0..=deg {
            for j in 0..=d {
                let i = d - j;
                let (si, sj) = (i + sx, j + sy);
                let f = if sx == 1 { si as f64 } else { sj as f64 };
                c[idx(i, j)] = f * self.c[idx(si, sj)];
            }
        }
        Jet { c, deg: deg as u8 }
    }

    /// `Σ_k coef[k] (self − self₀)^k`, the composition with a function whose
    /// scaled Taylor coefficients at the base value are `coef`.
    fn compose(&self, coef: [f64; MAX_DEG + 1]) -> Self {
        let mut delta = *self;
        delta.c[0] = 0.0;
        let mut out = Self::constant(coef[0]);
        out.deg = self.deg;
        let mut pow = delta;
        for &ck in coef.iter().skip(1).take(self.degree()) {
            for k in 0..NC {
                out.c[k] += ck * pow.c[k];
            }
            pow = pow * delta;
        }
        out
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        for k in 0..NC {
            self.c[k] += o.c[k];
        }
        self.deg = self.deg.min(o.deg);
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, o: Jet) -> Jet {
        for k in 0..NC {
            self.c[k] -= o.c[k];
        }
        self.deg = self.deg.min(o.deg);
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for v in &mut self.c {
            *v = -*v;
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let deg = self.deg.min(o.deg);
        let mut c = [0.0; NC];
        for &(a, b, k, d) in TABLE.entries.iter() {
            if d > deg {
                break;
            }
            c[k as usize] += self.c[a as usize] * o.c[b as usize];
        }
        Jet { c, deg }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, o: f64) -> Jet {
        self.c[0] += o;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, o: f64) -> Jet {
        self.c[0] -= o;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, o: f64) -> Jet {
        for v in &mut self.c {
            *v *= o;
        }
        self
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, o: f64) -> Jet {
        self * (1.0 / o)
    }
}

impl Real for Jet {
    fn cst(v: f64) -> Self {
        Jet::constant(v)
    }

    fn sqrt(self) -> Self {
        let a = self.c[0];
        let s = a.sqrt();
        self.compose([s, 0.5 / s, -0.125 / (s * a), 0.0625 / (s * a * a), -5.0 / 128.0 / (s * a * a * a)])
    }

    fn ln(self) -> Self {
        let a = self.c[0];
        self.compose([a.ln(), 1.0 / a, -0.5 / (a * a), 1.0 / (3.0 * a * a * a), -0.25 / (a * a * a * a)])
    }

    fn recip(self) -> Self {
        let r = 1.0 / self.c[0];
        self.compose([r, -r * r, r * r * r, -r * r * r * r, r * r * r * r * r])
    }

    fn value(self) -> f64 {
        self.c[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point() -> (Jet, Jet) {
        (Jet::var_x(0.3), Jet::var_y(-0.7))
    }

    #[test]
    fn polynomial_derivatives_are_exact() {
        let (x, y) = point();
        // f = x^3 y + 2 x y^2
        let f = x * x * x * y + x * y * y * 2.0;
        assert!((f.deriv(1, 0) - (3.0 * 0.09 * -0.7 + 2.0 * 0.49)).abs() < 1e-15);
        assert!((f.deriv(3, 1) - 6.0).abs() < 1e-14);
        assert!((f.deriv(1, 2) - 4.0).abs() < 1e-14);
        assert_eq!(f.deriv(0, 4), 0.0);
    }

    #[test]
    fn transcendental_derivatives_match_closed_forms() {
        let (x, y) = point();
        let r2 = x * x + y * y + 1.0;
        let r2v = r2.value();
        let inv = r2.recip();
        // d/dx (1/u) = -2x/u^2, d2/dx2 = -2/u^2 + 8x^2/u^3
        assert!((inv.deriv(1, 0) + 0.6 / (r2v * r2v)).abs() < 1e-14);
        let want = -2.0 / (r2v * r2v) + 8.0 * 0.09 / (r2v * r2v * r2v);
        assert!((inv.deriv(2, 0) - want).abs() < 1e-13);
        let s = r2.sqrt();
        assert!((s.deriv(0, 1) - (-0.7 / r2v.sqrt())).abs() < 1e-14);
        let l = r2.ln();
        assert!((l.deriv(1, 1) - (-4.0 * 0.3 * -0.7 / (r2v * r2v))).abs() < 1e-14);
    }

    #[test]
    fn differentiation_lowers_degree() {
        let (x, _) = point();
        let f = x * x;
        let fx = f.dx();
        assert_eq!(fx.degree(), MAX_DEG - 1);
        assert!((fx.deriv(1, 0) - 2.0).abs() < 1e-15);
        assert_eq!((fx * f).degree(), MAX_DEG - 1);
    }
}
