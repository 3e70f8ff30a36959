//! Centered finite differences on chart grids.
//!
//! Nodes whose stencil leaves the grid are set to NaN so that any later use
//! of an undefined value surfaces instead of silently biasing a result.

use super::grid::ChartGrid;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stencil {
    pub order: usize,
    first: &'static [f64],
    center: f64,
    second: &'static [f64],
}

impl Stencil {
    pub fn new(order: usize) -> Result<Self> {
        let (first, center, second): (&'static [f64], f64, &'static [f64]) = match order {
            2 => (&[0.5], -2.0, &[1.0]),
            4 => (&[2.0 / 3.0, -1.0 / 12.0], -2.5, &[4.0 / 3.0, -1.0 / 12.0]),
            6 => (&[0.75, -0.15, 1.0 / 60.0], -49.0 / 18.0, &[1.5, -0.15, 1.0 / 90.0]),
            8 => (&[0.8, -0.2, 4.0 / 105.0, -1.0 / 280.0], -205.0 / 72.0, &[1.6, -0.2, 8.0 / 315.0, -1.0 / 560.0]),
            _ => return Err(Error::Validation(format!("unsupported stencil order {order}"))),
        };
        Ok(Stencil { order, first, center, second })
    }

    /// Nodes consumed on each side by one derivative.
    pub fn reach(&self) -> usize {
        self.order / 2
    }

    fn apply(&self, g: &ChartGrid, f: &[f64], axis: usize, second: bool) -> Vec<f64> {
        let s = g.side();
        let m = self.reach();
        let h = g.h();
        let scale = if second { 1.0 / (h * h) } else { 1.0 / h };
        let coef = if second { self.second } else { self.first };
        let mut out = vec![f64::NAN; f.len()];
        let stride = if axis == 0 { s } else { 1 };
        for i in 0..s {
            for j in 0..s {
                let pos = if axis == 0 { i } else { j };
                if pos < m || pos + m >= s {
                    continue;
                }
                let k = i * s + j;
                let mut acc = if second { self.center * f[k] } else { 0.0 };
                for (q, &c) in coef.iter().enumerate() {
                    let d = (q + 1) * stride;
                    acc += if second { c * (f[k + d] + f[k - d]) } else { c * (f[k + d] - f[k - d]) };
                }
                out[k] = acc * scale;
            }
        }
        out
    }

    pub fn dx(&self, g: &ChartGrid, f: &[f64]) -> Vec<f64> {
        self.apply(g, f, 0, false)
    }

    pub fn dy(&self, g: &ChartGrid, f: &[f64]) -> Vec<f64> {
        self.apply(g, f, 1, false)
    }

    pub fn dxx(&self, g: &ChartGrid, f: &[f64]) -> Vec<f64> {
        self.apply(g, f, 0, true)
    }

    pub fn dyy(&self, g: &ChartGrid, f: &[f64]) -> Vec<f64> {
        self.apply(g, f, 1, true)
    }

    pub fn dxy(&self, g: &ChartGrid, f: &[f64]) -> Vec<f64> {
        self.dy(g, &self.dx(g, f))
    }

    pub fn laplacian(&self, g: &ChartGrid, f: &[f64]) -> Vec<f64> {
        let a = self.dxx(g, f);
        let b = self.dyy(g, f);
        a.iter().zip(&b).map(|(u, v)| u + v).collect()
    }
}

/// First and second partial derivatives of a scalar grid function.
#[derive(Clone, Debug)]
pub struct Derivatives {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub xx: Vec<f64>,
    pub xy: Vec<f64>,
    pub yy: Vec<f64>,
}

impl Derivatives {
    pub fn of(st: &Stencil, g: &ChartGrid, f: &[f64]) -> Self {
        let x = st.dx(g, f);
        let xy = st.dy(g, &x);
        Derivatives { y: st.dy(g, f), xx: st.dxx(g, f), yy: st.dyy(g, f), x, xy }
    }

    pub fn first_only(st: &Stencil, g: &ChartGrid, f: &[f64]) -> Self {
        let nan = vec![f64::NAN; f.len()];
        Derivatives { x: st.dx(g, f), y: st.dy(g, f), xx: nan.clone(), xy: nan.clone(), yy: nan }
    }
}
