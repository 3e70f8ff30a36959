//! Scalar fields sampled on both chart grids.

use super::{integrate_charts, quadrature_weights, Blend, Chart, ChartGrid};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    pub grid: ChartGrid,
    pub values: [Vec<f64>; 2],
}

impl ScalarField {
    pub fn new(grid: ChartGrid, north: Vec<f64>, south: Vec<f64>) -> Self {
        ScalarField { grid, values: [north, south] }
    }

    pub fn chart(&self, c: Chart) -> &[f64] {
        &self.values[c.id()]
    }

    /// Largest absolute value over the nodes with `|z| ≤ radius` in both
    /// charts. An undefined node there is a margin failure.
    pub fn sup_in_disk(&self, radius: f64, what: &'static str) -> Result<f64> {
        self.sup_where(what, |_, z| z[0] * z[0] + z[1] * z[1] <= radius * radius)
    }

    /// Largest absolute value over the nodes selected by `keep`.
    pub fn sup_where(&self, what: &'static str, keep: impl Fn(Chart, [f64; 2]) -> bool) -> Result<f64> {
        let mut m: f64 = 0.0;
        for c in Chart::BOTH {
            for (k, v) in self.chart(c).iter().enumerate() {
                let z = self.grid.z(k);
                if keep(c, z) {
                    if !v.is_finite() {
                        return Err(Error::Margin { what, n: self.grid.n });
                    }
                    m = m.max(v.abs());
                }
            }
        }
        Ok(m)
    }

    /// Pointwise difference.
    pub fn sub(&self, other: &ScalarField) -> ScalarField {
        let d = |c: usize| self.values[c].iter().zip(&other.values[c]).map(|(a, b)| a - b).collect();
        ScalarField { grid: self.grid, values: [d(0), d(1)] }
    }

    /// `∫ f dA` against the round unit-sphere measure `4/(1+|z|²)² dz`.
    pub fn integrate_sphere(&self, blend: &Blend, what: &'static str) -> Result<f64> {
        let w =
            [quadrature_weights(&self.grid, blend, Chart::North), quadrature_weights(&self.grid, blend, Chart::South)];
        integrate_charts(&self.grid, &w, what, |c, k| {
            let z = self.grid.z(k);
            let r2 = z[0] * z[0] + z[1] * z[1];
            self.values[c.id()][k] * 4.0 / ((1.0 + r2) * (1.0 + r2))
        })
    }
}
