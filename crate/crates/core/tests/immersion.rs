mod common;

use common::{revolution_curvature, revolution_willmore, rotation};
use proptest::prelude::*;
use std::f64::consts::PI;
use willmore_core::background::{CurvatureBackground, MetricJet, Order};
use willmore_core::immersion::{
    area, center_of_mass, diameter, geometry, read_snapshot, simon_bounds_check, willmore_energy, write_snapshot,
    Chart, DiscreteImmersion,
};
use willmore_core::Error;

/// Evaluates `f(chart, node)` on every node carrying quadrature weight.
fn over_support(im: &DiscreteImmersion, mut f: impl FnMut(Chart, usize)) {
    let g = im.grid();
    for c in Chart::BOTH {
        for k in 0..g.len() {
            if im.blend.weight(c, g.z(k)) > 0.0 {
                f(c, k);
            }
        }
    }
}

#[test]
fn round_spheres_have_constant_mean_curvature() {
    let jet = MetricJet::flat();
    for (r, want) in [(1.0, 1.0), (2.0, 0.5)] {
        let im = DiscreteImmersion::round_sphere(64, r, [0.1, 0.2, -0.3]);
        let gf = geometry(&im, &jet).unwrap();
        over_support(&im, |c, k| {
            let p = &gf.chart(c)[k];
            assert!((p.h - want).abs() < 1e-5, "{} vs {want}", p.h);
            assert!(p.a0sq.abs() < 1e-9);
        });
    }
}

/// `r(θ) = 1 + a·Y₂₀(θ)` against the closed-form profile curvature.
fn graph_sphere_error(n: usize) -> f64 {
    let a = 0.1 * (5.0 / (16.0 * PI)).sqrt();
    let r = |c: f64| 1.0 + a * (3.0 * c * c - 1.0);
    let im = DiscreteImmersion::from_sphere_map(n, |p| {
        let s = r(p[2]);
        [s * p[0], s * p[1], s * p[2]]
    });
    let gf = geometry(&im, &MetricJet::flat()).unwrap();
    let mut err: f64 = 0.0;
    over_support(&im, |c, k| {
        let p = c.to_sphere(im.grid().z(k));
        let (ct, st) = (p[2], (p[0] * p[0] + p[1] * p[1]).sqrt());
        if st < 1e-3 {
            return;
        }
        let rr = r(ct);
        let r1 = -6.0 * a * ct * st;
        let r2 = -6.0 * a * (ct * ct - st * st);
        let rho = [rr * st, r1 * st + rr * ct, r2 * st + 2.0 * r1 * ct - rr * st];
        let z = [rr * ct, r1 * ct - rr * st, r2 * ct - 2.0 * r1 * st - rr * ct];
        let (h, _) = revolution_curvature(rho, z);
        err = err.max((gf.chart(c)[k].h - h).abs());
    });
    err
}

#[test]
fn graph_sphere_mean_curvature_converges() {
    let (e1, e2) = (graph_sphere_error(64), graph_sphere_error(128));
    let order = (e1 / e2).log2();
    assert!(order >= 3.5, "errors {e1:e} {e2:e}, order {order}");
    assert!(e2 < 1e-5);
}

#[test]
fn ellipsoid_energy_matches_profile_quadrature() {
    let c = 1.2;
    let oracle = revolution_willmore(400, |t| {
        let (s, co) = t.sin_cos();
        ([s, co, -s], [c * co, -c * s, -c * co])
    });
    let im = DiscreteImmersion::from_sphere_map(192, |p| [p[0], p[1], c * p[2]]);
    let w = willmore_energy(&im, &MetricJet::flat()).unwrap();
    assert!(((w - oracle) / oracle).abs() < 1e-6, "{w} vs {oracle}");
}

#[test]
fn round_sphere_energy_is_scale_invariant_and_converges() {
    let jet = MetricJet::flat();
    for r in [0.5, 1.0, 3.0] {
        let w = willmore_energy(&DiscreteImmersion::round_sphere(128, r, [0.0; 3]), &jet).unwrap();
        assert!((w - 4.0 * PI).abs() < 1e-6, "r = {r}: {w}");
    }
    let errs: Vec<f64> = [128, 256]
        .iter()
        .map(|&n| (willmore_energy(&DiscreteImmersion::round_sphere(n, 1.0, [0.0; 3]), &jet).unwrap() - 4.0 * PI).abs())
        .collect();
    assert!(errs[1] < 1e-8 && errs[1] < errs[0] / 16.0, "{errs:?}");
}

#[test]
fn area_center_and_diameter_of_unit_sphere() {
    let jet = MetricJet::flat();
    let im = DiscreteImmersion::round_sphere(128, 1.0, [0.0; 3]);
    assert!((area(&im, &jet).unwrap() - 4.0 * PI).abs() < 1e-6);
    let m0 = center_of_mass(&im, &jet).unwrap();
    assert!(m0.iter().all(|v| v.abs() < 1e-8), "{m0:?}");
    let d = diameter(&im);
    assert!(d <= 2.0 + 1e-12 && d > 2.0 - 4.0 / 128.0, "{d}");
    let c = [0.4, -1.0, 2.5];
    let shifted = DiscreteImmersion::round_sphere(128, 1.0, c);
    let m = center_of_mass(&shifted, &jet).unwrap();
    assert!((0..3).all(|a| (m[a] - c[a] - m0[a]).abs() < 1e-12), "{m:?}");
}

#[test]
fn curved_area_matches_density_oracle() {
    // on |y| = 1 the truncated constant-curvature metric restricts to
    // (1 − ε²/3)·euclidean: the area density is the flat one times that
    // factor at every node, and the area is 4π(1 − ε²/3)
    let eps = 0.1;
    let jet = MetricJet::new(CurvatureBackground::space_form(1.0), eps, Order::Three);
    let im = DiscreteImmersion::round_sphere(128, 1.0, [0.0; 3]);
    let a = area(&im, &jet).unwrap();
    let flat = area(&im, &MetricJet::flat()).unwrap();
    let k = 1.0 - eps * eps / 3.0;
    assert!((a - k * flat).abs() < 1e-13, "{a} {flat}");
    assert!((a - 4.0 * PI * k).abs() < 1e-6, "{a}");
}

#[test]
fn rigid_motions_leave_flat_energy_invariant() {
    let jet = MetricJet::flat();
    let base = DiscreteImmersion::from_sphere_map(128, |p| [p[0], 0.9 * p[1], 1.15 * p[2]]);
    let w0 = willmore_energy(&base, &jet).unwrap();
    let r = rotation([0.3, -0.8, 0.5], 1.1);
    let moved = base.map(|_, _, p| {
        let q = [0, 1, 2].map(|a| r[a][0] * p[0] + r[a][1] * p[1] + r[a][2] * p[2]);
        [q[0] + 0.7, q[1] - 2.0, q[2] + 0.3]
    });
    let w1 = willmore_energy(&moved, &jet).unwrap();
    assert!((w1 - w0).abs() < 1e-9 * w0, "{w0} {w1}");
}

#[test]
fn charts_agree_on_the_overlap() {
    let im = DiscreteImmersion::from_sphere_map(64, |p| [p[0] + 0.2 * p[1] * p[2], p[1], 1.1 * p[2]]);
    assert!(im.chart_consistency_defect() < 1e-6);
}

#[test]
fn degenerate_and_coarse_maps_are_reported() {
    let jet = MetricJet::flat();
    let flat_disk = DiscreteImmersion::from_sphere_map(32, |p| [p[0], p[1], 0.0]);
    assert!(matches!(
        geometry(&flat_disk, &jet),
        Err(Error::Degenerate { .. }) | Err(Error::OrientationAmbiguous { .. })
    ));
    let coarse = DiscreteImmersion::round_sphere(8, 1.0, [0.0; 3]);
    assert!(matches!(geometry(&coarse, &jet).and_then(|g| g.area()), Err(Error::Margin { .. })));
}

#[test]
fn simon_bounds_on_unit_sphere_and_degenerate_map() {
    let jet = MetricJet::flat();
    let r = simon_bounds_check(&DiscreteImmersion::round_sphere(64, 1.0, [0.0; 3]), &jet);
    assert!(r.lower_bound_holds && r.degenerate.is_none());
    assert!((r.lower_bound - 1.0).abs() < 1e-6 && (r.diameter - 2.0).abs() < 0.05);
    let collapsed = DiscreteImmersion::from_sphere_map(32, |p| [p[0], 0.0, 0.0]);
    let r = simon_bounds_check(&collapsed, &jet);
    assert!(r.degenerate.is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn simon_lower_bound_holds_for_graph_spheres(c in prop::array::uniform3(-0.15f64..0.15)) {
        let im = DiscreteImmersion::from_sphere_map(48, |p| {
            let s = 1.0 + c[0] * p[0] * p[1] + c[1] * (3.0 * p[2] * p[2] - 1.0) + c[2] * p[0] * p[2] * p[2];
            [s * p[0], s * p[1], s * p[2]]
        });
        let r = simon_bounds_check(&im, &MetricJet::flat());
        prop_assert!(r.degenerate.is_none());
        prop_assert!(r.lower_bound_holds, "{r:?}");
    }

    #[test]
    fn snapshots_round_trip_bit_exactly(c in prop::array::uniform3(-1.0f64..1.0), s in 0.1f64..3.0) {
        let im = DiscreteImmersion::from_sphere_map(16, |p| [s * p[0] + c[0], p[1] * p[2] + c[1], s * p[2].sin() + c[2]]);
        let back = read_snapshot(&write_snapshot(&im)).unwrap();
        prop_assert_eq!(back, im);
    }
}
