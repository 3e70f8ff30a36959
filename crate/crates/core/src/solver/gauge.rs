//! Fixing the Möbius, rotation and translation freedom of an immersion.

use crate::error::{Error, Result};
use crate::immersion::{lagrange_interpolate, Chart, DiscreteImmersion};
use crate::real::{cross, dot, norm, sub};
use rayon::prelude::*;

/// The normalization applied by [`gauge_normalize`]: the new map is
/// `R (Φ(a + z·) − center)` in the north chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gauge {
    /// Domain shift, north chart.
    pub a: [f64; 2],
    /// Shift of the reference parametrization; the reference is `ω` itself.
    pub b: [f64; 2],
    pub rotation: [[f64; 3]; 3],
    /// Complex domain scale `(re, im)`.
    pub z: [f64; 2],
    /// Translation removed from the image.
    pub translation: [f64; 3],
}

impl Gauge {
    pub fn identity() -> Self {
        Gauge {
            a: [0.0; 2],
            b: [0.0; 2],
            rotation: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            z: [1.0, 0.0],
            translation: [0.0; 3],
        }
    }
}

/// Unweighted-by-metric center of mass `∫Φ dA / ∫dA` with the euclidean
/// area element.
fn flat_center(im: &DiscreteImmersion) -> Result<[f64; 3]> {
    let jet = crate::background::MetricJet::flat();
    crate::immersion::center_of_mass(im, &jet)
}

/// `|Φ_x|² + |Φ_y|²` on the north chart from the immersion's stencil.
fn grad2_north(im: &DiscreteImmersion) -> Result<Vec<f64>> {
    let d = im.derivatives(Chart::North)?;
    let len = im.north.len();
    Ok((0..len).map(|k| (0..3).map(|a| d[a].x[k] * d[a].x[k] + d[a].y[k] * d[a].y[k]).sum()).collect())
}

/// Domain shifts below this fraction of the grid spacing, together with a
/// scale within `SCALE_TOL` of one, are not resampled.
const SHIFT_TOL: f64 = 0.05;
const SCALE_TOL: f64 = 1e-4;

/// Maximum search disk of the north chart for `|∇Φ|`.
const SEARCH_RADIUS: f64 = 1.0;

/// Recenters `im`, moves the maximum of `|∇Φ|` to the north chart origin,
/// aligns the tangent frame there with that of `ω` and matches
/// `|Φ_x(0)|` to the reference sphere of the same area. Uses the euclidean
/// metric throughout.
pub fn gauge_normalize(im: &DiscreteImmersion) -> Result<(DiscreteImmersion, Gauge)> {
    let g = im.grid();
    let center = flat_center(im)?;
    let grad2 = grad2_north(im)?;
    // stencil margins hold NaN and are skipped below
    let h = g.h();
    // maximum over the search disk
    let mut best = None;
    for (k, v) in grad2.iter().enumerate() {
        let z = g.z(k);
        if z[0] * z[0] + z[1] * z[1] > SEARCH_RADIUS * SEARCH_RADIUS || !v.is_finite() {
            continue;
        }
        if best.is_none_or(|(_, b)| *v > b) {
            best = Some((k, *v));
        }
    }
    let (k, _) = best.ok_or_else(|| Error::Gauge("no finite gradient in the search disk".into()))?;
    let z0 = g.z(k);
    if (z0[0] * z0[0] + z0[1] * z0[1]).sqrt() > SEARCH_RADIUS - 1.5 * h {
        return Err(Error::Gauge(format!("|∇Φ| is maximal on the search boundary at z = {z0:?}")));
    }
    // quadratic refinement from the 3×3 neighbourhood
    let (i, j) = g.ij(k);
    let f = |di: isize, dj: isize| grad2[g.index((i as isize + di) as usize, (j as isize + dj) as usize)];
    let fx = (f(1, 0) - f(-1, 0)) / (2.0 * h);
    let fy = (f(0, 1) - f(0, -1)) / (2.0 * h);
    let fxx = (f(1, 0) - 2.0 * f(0, 0) + f(-1, 0)) / (h * h);
    let fyy = (f(0, 1) - 2.0 * f(0, 0) + f(0, -1)) / (h * h);
    let fxy = (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) / (4.0 * h * h);
    let det = fxx * fyy - fxy * fxy;
    let mut a = z0;
    if det > 0.0 && fxx < 0.0 {
        let dx = -(fyy * fx - fxy * fy) / det;
        let dy = -(fxx * fy - fxy * fx) / det;
        if dx.abs() <= h && dy.abs() <= h {
            a = [z0[0] + dx, z0[1] + dy];
        }
    }
    let ref_area = crate::immersion::area(im, &crate::background::MetricJet::flat())?;
    let s = (ref_area / (4.0 * std::f64::consts::PI)).sqrt();

    // tangent frame at the new origin from the interpolated derivatives
    let d = im.derivatives(Chart::North)?;
    let dxs: Vec<[f64; 3]> = (0..g.len()).map(|k| [d[0].x[k], d[1].x[k], d[2].x[k]]).collect();
    let dys: Vec<[f64; 3]> = (0..g.len()).map(|k| [d[0].y[k], d[1].y[k], d[2].y[k]]).collect();
    let px = lagrange_interpolate(&g, &dxs, a);
    let py = lagrange_interpolate(&g, &dys, a);
    let lx = norm(&px);
    let e1 = px.map(|v| v / lx);
    let t2 = sub(&py, &e1.map(|v| v * dot(&py, &e1)));
    let e2 = t2.map(|v| v / norm(&t2));
    let e3 = cross(&e1, &e2);
    // ω has Φ_x ∥ e₁, Φ_y ∥ e₂ at the origin of the north chart
    let rotation = [e1, e2, e3];
    let c = 2.0 * s / lx;

    let gauge = Gauge { a, b: [0.0; 2], rotation, z: [c, 0.0], translation: center };
    let shift_small = a[0].hypot(a[1]) <= SHIFT_TOL * h && (c - 1.0).abs() <= SCALE_TOL;
    let domain = |ch: Chart, z: [f64; 2]| -> [f64; 3] {
        // north: ζ ↦ a + cζ; south: w ↦ w/(ā w + c)
        match ch {
            Chart::North => Chart::North.to_sphere([a[0] + c * z[0], a[1] + c * z[1]]),
            Chart::South => {
                let (wr, wi) = (z[0], z[1]);
                let (dr, di) = (a[0] * wr + a[1] * wi + c, a[0] * wi - a[1] * wr);
                let q = dr * dr + di * di;
                Chart::South.to_sphere([(wr * dr + wi * di) / q, (wi * dr - wr * di) / q])
            }
        }
    };
    let apply = |p: [f64; 3]| -> [f64; 3] {
        let d = sub(&p, &center);
        [dot(&rotation[0], &d), dot(&rotation[1], &d), dot(&rotation[2], &d)]
    };
    let out = if shift_small {
        im.map(|_, _, p| apply(p))
    } else {
        let gr = im.grid();
        let resample = |ch: Chart| -> Vec<[f64; 3]> {
            (0..gr.len()).into_par_iter().map(|k| apply(im.eval_sphere(domain(ch, gr.z(k))))).collect()
        };
        DiscreteImmersion { north: resample(Chart::North), south: resample(Chart::South), ..im.clone() }
    };
    Ok((out, gauge))
}
