//! Stereographic charts, their uniform grids and the partition of unity.

use crate::real::{Real, V3};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Half-width of the square chart domain `[-2, 2]²`.
pub const HALF_WIDTH: f64 = 2.0;

/// The two stereographic charts of S².
///
/// `North` is projection from the north pole, `ω(z) = (2x, 2y, r²−1)/(1+r²)`;
/// its origin is the south pole. `South` is projection from the south pole,
/// centered at the north pole. The transition is `w = z/|z|²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    North,
    South,
}

impl Chart {
    pub const BOTH: [Chart; 2] = [Chart::North, Chart::South];

    pub fn id(self) -> usize {
        match self {
            Chart::North => 0,
            Chart::South => 1,
        }
    }

    pub fn from_id(id: usize) -> Option<Chart> {
        match id {
            0 => Some(Chart::North),
            1 => Some(Chart::South),
            _ => None,
        }
    }

    pub fn to_sphere(self, z: [f64; 2]) -> [f64; 3] {
        self.to_sphere_generic(z[0], z[1])
    }

    pub fn to_sphere_generic<T: Real>(self, x: T, y: T) -> V3<T> {
        let r2 = x * x + y * y;
        let inv = (r2 + 1.0).recip();
        let third = match self {
            Chart::North => r2 - 1.0,
            Chart::South => -r2 + 1.0,
        };
        [x * inv * 2.0, y * inv * 2.0, third * inv]
    }

    pub fn from_sphere(self, p: [f64; 3]) -> [f64; 2] {
        let d = match self {
            Chart::North => 1.0 - p[2],
            Chart::South => 1.0 + p[2],
        };
        [p[0] / d, p[1] / d]
    }

    pub fn other(self) -> Chart {
        match self {
            Chart::North => Chart::South,
            Chart::South => Chart::North,
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chart::North => write!(f, "north"),
            Chart::South => write!(f, "south"),
        }
    }
}

/// `z ↦ z/|z|²`.
pub fn transition(z: [f64; 2]) -> [f64; 2] {
    let r2 = z[0] * z[0] + z[1] * z[1];
    [z[0] / r2, z[1] / r2]
}

/// Node layout of a chart: `(n+1)²` nodes with spacing `4/n`, node `(i, j)`
/// at `(−2 + i h, −2 + j h)`, stored with `i` major.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChartGrid {
    pub n: usize,
}

impl ChartGrid {
    pub fn new(n: usize) -> Self {
        assert!(n >= 8 && n.is_multiple_of(2), "grid resolution must be even and at least 8");
        ChartGrid { n }
    }

    pub fn side(&self) -> usize {
        self.n + 1
    }

    pub fn len(&self) -> usize {
        self.side() * self.side()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        2.0 * HALF_WIDTH / self.n as f64
    }

    pub fn coord(&self, k: usize) -> f64 {
        -HALF_WIDTH + k as f64 * self.h()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.side() + j
    }

    pub fn ij(&self, idx: usize) -> (usize, usize) {
        (idx / self.side(), idx % self.side())
    }

    pub fn z(&self, idx: usize) -> [f64; 2] {
        let (i, j) = self.ij(idx);
        [self.coord(i), self.coord(j)]
    }

    /// Index of the node at the chart origin.
    pub fn center(&self) -> usize {
        self.index(self.n / 2, self.n / 2)
    }
}

/// Smooth partition of unity between the charts. The north weight is 1 for
/// `|z| ≤ inner`, 0 for `|z| ≥ outer`, and blends with a `C^∞` step in
/// `ln |z|`; the south weight is its complement under the transition map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Blend {
    pub inner: f64,
    pub outer: f64,
}

impl Default for Blend {
    fn default() -> Self {
        Blend { inner: 0.75, outer: 1.5 }
    }
}

fn step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / (t * t)).exp();
    let b = (-1.0 / ((1.0 - t) * (1.0 - t))).exp();
    a / (a + b)
}

impl Blend {
    pub fn north_weight(&self, r: f64) -> f64 {
        if r <= self.inner {
            return 1.0;
        }
        if r >= self.outer {
            return 0.0;
        }
        step((self.outer / r).ln() / (self.outer / self.inner).ln())
    }

    pub fn south_weight(&self, r: f64) -> f64 {
        if r == 0.0 {
            return 1.0;
        }
        1.0 - self.north_weight(1.0 / r)
    }

    pub fn weight(&self, chart: Chart, z: [f64; 2]) -> f64 {
        let r = (z[0] * z[0] + z[1] * z[1]).sqrt();
        match chart {
            Chart::North => self.north_weight(r),
            Chart::South => self.south_weight(r),
        }
    }

    /// Radius beyond which the chart's weight vanishes.
    pub fn support_radius(&self, chart: Chart) -> f64 {
        match chart {
            Chart::North => self.outer,
            Chart::South => 1.0 / self.inner,
        }
    }
}
