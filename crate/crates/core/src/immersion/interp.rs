//! Tensor-product Lagrange interpolation of chart data.

use super::grid::{ChartGrid, HALF_WIDTH};

/// Points per axis; degree-7 interpolation keeps the error below the
/// sixth-order derivative error at the resolutions in use.
pub const INTERP_POINTS: usize = 8;

fn weights_1d(g: &ChartGrid, t: f64) -> (usize, [f64; INTERP_POINTS]) {
    let h = g.h();
    let u = (t + HALF_WIDTH) / h;
    let half = INTERP_POINTS / 2;
    let base = (u.floor() as isize - (half as isize - 1)).clamp(0, (g.n + 1 - INTERP_POINTS) as isize) as usize;
    let mut w = [0.0; INTERP_POINTS];
    for (a, wa) in w.iter_mut().enumerate() {
        let xa = (base + a) as f64;
        let mut v = 1.0;
        for b in 0..INTERP_POINTS {
            if b != a {
                let xb = (base + b) as f64;
                v *= (u - xb) / (xa - xb);
            }
        }
        *wa = v;
    }
    (base, w)
}

/// Interpolates vector chart data at `z`; points outside the grid are
/// extrapolated from the nearest stencil.
pub fn lagrange_interpolate(g: &ChartGrid, data: &[[f64; 3]], z: [f64; 2]) -> [f64; 3] {
    let (bi, wi) = weights_1d(g, z[0]);
    let (bj, wj) = weights_1d(g, z[1]);
    let mut out = [0.0; 3];
    for (a, wa) in wi.iter().enumerate() {
        for (b, wb) in wj.iter().enumerate() {
            let p = data[g.index(bi + a, bj + b)];
            let w = wa * wb;
            for k in 0..3 {
                out[k] += w * p[k];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_polynomials_of_degree_seven() {
        let g = ChartGrid::new(32);
        let f = |z: [f64; 2]| [z[0].powi(7) - z[1], z[0] * z[1].powi(3), 1.0];
        let data: Vec<[f64; 3]> = (0..g.len()).map(|k| f(g.z(k))).collect();
        for z in [[0.33, -1.17], [1.99, 0.0], [-0.01, 0.4]] {
            let v = lagrange_interpolate(&g, &data, z);
            let w = f(z);
            for k in 0..3 {
                assert!((v[k] - w[k]).abs() < 1e-11, "{z:?}");
            }
        }
    }
}
