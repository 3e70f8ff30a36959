//! Deviation of a sampled surface from its best-fit sphere.

use crate::immersion::DiscreteImmersion;
use crate::real::{norm, sub};
use nalgebra::{Matrix4, Vector4};

/// Least-squares sphere through `points`: algebraic fit followed by
/// Gauss–Newton on the geometric distances.
pub fn fit_sphere(points: &[[f64; 3]]) -> ([f64; 3], f64) {
    // |p|² = 2c·p + (r² − |c|²) is linear in (c, k)
    let mut ata = Matrix4::<f64>::zeros();
    let mut atb = Vector4::<f64>::zeros();
    for p in points {
        let row = Vector4::new(2.0 * p[0], 2.0 * p[1], 2.0 * p[2], 1.0);
        ata += row * row.transpose();
        atb += row * (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    }
    let sol = ata.lu().solve(&atb).unwrap_or_else(Vector4::zeros);
    let mut c = [sol[0], sol[1], sol[2]];
    let mut r = (sol[3] + c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).max(0.0).sqrt();
    for _ in 0..20 {
        // residual d_i = |p − c| − r, unknowns (c, r)
        let mut jtj = Matrix4::<f64>::zeros();
        let mut jtr = Vector4::<f64>::zeros();
        for p in points {
            let d = sub(p, &c);
            let l = norm(&d);
            if l == 0.0 {
                continue;
            }
            let row = Vector4::new(-d[0] / l, -d[1] / l, -d[2] / l, -1.0);
            jtj += row * row.transpose();
            jtr += row * (l - r);
        }
        let Some(step) = jtj.lu().solve(&(-jtr)) else { break };
        c = [c[0] + step[0], c[1] + step[1], c[2] + step[2]];
        r += step[3];
        if step.norm() <= 1e-15 * r.abs().max(1.0) {
            break;
        }
    }
    (c, r)
}

/// `max |dist(p, S) | / R` over the owned samples, with `S` the best-fit
/// sphere of radius `R`.
pub fn roundness(im: &DiscreteImmersion) -> f64 {
    let pts = im.owned_points();
    let (c, r) = fit_sphere(&pts);
    pts.iter().map(|p| (norm(&sub(p, &c)) - r).abs()).fold(0.0, f64::max) / r
}
