//! Extrinsic diameter and the diameter/area/energy diagnostics.

use super::{geometry, DiscreteImmersion};
use crate::background::MetricJet;
use crate::real::{norm, sub};
use rayon::prelude::*;

const COARSE_POINTS: usize = 3000;

fn farthest_pair(pts: &[[f64; 3]]) -> (f64, usize, usize) {
    (0..pts.len())
        .into_par_iter()
        .map(|a| {
            let mut best = (0.0, a, a);
            for b in a + 1..pts.len() {
                let d = norm(&sub(&pts[a], &pts[b]));
                if d > best.0 {
                    best = (d, a, b);
                }
            }
            best
        })
        .reduce(|| (0.0, 0, 0), |x, y| if y.0 > x.0 { y } else { x })
}

/// Euclidean diameter of the sampled surface. A strided cloud locates the
/// farthest pair, which is then refined using all samples near its ends.
pub fn diameter(im: &DiscreteImmersion) -> f64 {
    let pts = im.owned_points();
    if pts.len() < 2 {
        return 0.0;
    }
    let stride = (pts.len() / COARSE_POINTS).max(1);
    let coarse: Vec<[f64; 3]> = pts.iter().step_by(stride).copied().collect();
    let (d0, a, b) = farthest_pair(&coarse);
    if stride == 1 {
        return d0;
    }
    // neighbourhood radius: a few coarse spacings
    let spacing = (4.0 * std::f64::consts::PI / coarse.len() as f64).sqrt() * d0 / 2.0;
    let near =
        |c: [f64; 3]| -> Vec<[f64; 3]> { pts.iter().filter(|p| norm(&sub(p, &c)) <= 3.0 * spacing).copied().collect() };
    let (pa, pb) = (near(coarse[a]), near(coarse[b]));
    let best = pa.par_iter().map(|p| pb.iter().map(|q| norm(&sub(p, q))).fold(0.0, f64::max)).reduce(|| 0.0, f64::max);
    best.max(d0)
}

/// Quantities entering the diameter bounds for small surfaces, with the
/// checks evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct SimonReport {
    pub area: f64,
    pub willmore: f64,
    pub diameter: f64,
    pub max_radius: f64,
    /// `√(Area/W)`.
    pub lower_bound: f64,
    pub lower_bound_holds: bool,
    pub energy_below_8pi: bool,
    pub diameter_in_range: bool,
    pub inside_ball: bool,
    /// Set when the geometry could not be evaluated; the other fields are
    /// then NaN or false.
    pub degenerate: Option<String>,
}

/// Flat-metric diameter, area and energy diagnostics. Never fails; a
/// geometry error is reported in `degenerate`.
pub fn simon_bounds_check(im: &DiscreteImmersion, _jet: &MetricJet) -> SimonReport {
    let flat = MetricJet::flat();
    let diam = diameter(im);
    let max_radius = im.owned_points().iter().map(norm).fold(0.0, f64::max);
    let (area, willmore, degenerate) = match geometry(im, &flat).and_then(|g| Ok((g.area()?, g.willmore_energy()?))) {
        Ok((a, w)) => (a, w, None),
        Err(e) => (f64::NAN, f64::NAN, Some(e.to_string())),
    };
    let lower = (area / willmore).sqrt();
    SimonReport {
        area,
        willmore,
        diameter: diam,
        max_radius,
        lower_bound: lower,
        lower_bound_holds: lower <= diam * (1.0 + 1e-9),
        energy_below_8pi: willmore < 8.0 * std::f64::consts::PI,
        diameter_in_range: (0.5..=2.0).contains(&diam),
        inside_ball: max_radius < 2.0,
        degenerate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_sphere_diameter() {
        let im = DiscreteImmersion::round_sphere(128, 1.0, [0.0; 3]);
        assert!((diameter(&im) - 2.0).abs() < 1e-3);
        let r = simon_bounds_check(&im, &MetricJet::flat());
        assert!(r.lower_bound_holds && r.energy_below_8pi && r.inside_ball && r.diameter_in_range);
        assert!((r.lower_bound - 1.0).abs() < 1e-6);
    }

    #[test]
    fn degenerate_map_is_flagged() {
        let im = DiscreteImmersion::from_sphere_map(32, |p| [p[0], 0.0, 0.0]);
        let r = simon_bounds_check(&im, &MetricJet::flat());
        assert!(r.degenerate.is_some());
        assert!(!r.lower_bound_holds);
    }
}
