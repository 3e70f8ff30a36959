mod common;

use common::rotation;
use proptest::prelude::*;
use std::f64::consts::PI;
use willmore_core::background::MetricJet;
use willmore_core::immersion::{area, Chart, DiscreteImmersion, ScalarField};
use willmore_core::willmore::{
    hawking_mass, hawking_mass_from, lambda_estimate, residual_direct, residual_divergence, HawkingConvention,
};
use willmore_core::Error;

fn sup_on_support(f: &ScalarField, im: &DiscreteImmersion, shift: f64) -> f64 {
    let mut m: f64 = 0.0;
    for c in Chart::BOTH {
        for (k, v) in f.chart(c).iter().enumerate() {
            if im.blend.weight(c, f.grid.z(k)) > 0.0 {
                m = m.max((v - shift).abs());
            }
        }
    }
    m
}

#[test]
fn flat_round_sphere_residual_converges() {
    let jet = MetricJet::flat();
    let errs: Vec<f64> = [64, 128]
        .iter()
        .map(|&n| {
            let im = DiscreteImmersion::round_sphere(n, 1.0, [0.0; 3]);
            sup_on_support(&residual_direct(&im, &jet, 0.0).unwrap(), &im, 0.0)
        })
        .collect();
    let order = (errs[0] / errs[1]).log2();
    assert!(order >= 3.0, "{errs:?}");
}

#[test]
fn round_sphere_residual_is_minus_lambda_over_radius() {
    let jet = MetricJet::flat();
    for (r, lambda) in [(2.0, 0.7), (0.5, -1.3)] {
        let im = DiscreteImmersion::round_sphere(128, r, [0.3, 0.0, -0.1]);
        let f = residual_direct(&im, &jet, lambda).unwrap();
        assert!(sup_on_support(&f, &im, -lambda / r) < 1e-4 / r.powi(3), "r = {r}");
        let d = residual_divergence(&im, &jet, lambda).unwrap();
        assert!(sup_on_support(&d, &im, -lambda / r) < 1e-4 / r.powi(3), "r = {r}");
    }
}

#[test]
fn flat_round_sphere_multipliers_vanish() {
    let jet = MetricJet::flat();
    let im = DiscreteImmersion::round_sphere(128, 1.5, [0.0; 3]);
    let e = lambda_estimate(&im, &jet).unwrap();
    assert!(e.lambda_projection.abs() < 1e-6 && e.lambda_dilation.abs() < 1e-6, "{e:?}");
    let a = area(&im, &jet).unwrap();
    assert!((e.delta_area - 2.0 * a).abs() < 1e-9 * a);
}

#[test]
fn projection_multiplier_is_invariant_under_rigid_motions() {
    let jet = MetricJet::flat();
    let base = DiscreteImmersion::from_sphere_map(128, |p| [p[0], 1.1 * p[1], 0.9 * p[2]]);
    let l0 = lambda_estimate(&base, &jet).unwrap().lambda_projection;
    let r = rotation([1.0, 2.0, -0.5], 0.8);
    let moved = base.map(|_, _, p| {
        let q = [0, 1, 2].map(|a| r[a][0] * p[0] + r[a][1] * p[1] + r[a][2] * p[2]);
        [q[0] - 1.0, q[1] + 0.5, q[2] + 2.0]
    });
    let l1 = lambda_estimate(&moved, &jet).unwrap().lambda_projection;
    assert!(l0.abs() > 1e-3);
    assert!((l1 - l0).abs() < 1e-9 * l0.abs().max(1.0), "{l0} {l1}");
}

#[test]
fn divergence_form_refuses_non_conformal_maps() {
    let im = DiscreteImmersion::from_sphere_map(64, |p| [p[0], p[1], 1.3 * p[2]]);
    assert!(matches!(residual_divergence(&im, &MetricJet::flat(), 0.0), Err(Error::NotConformal { .. })));
}

#[test]
fn hawking_mass_of_round_spheres_vanishes() {
    let jet = MetricJet::flat();
    for r in [0.5, 1.0, 2.0] {
        let im = DiscreteImmersion::round_sphere(128, r, [0.0; 3]);
        for conv in [HawkingConvention::Area, HawkingConvention::SqrtArea] {
            assert!(hawking_mass(&im, &jet, conv).unwrap().abs() < 1e-7 * r * r.max(1.0));
        }
    }
}

#[test]
fn hawking_arithmetic_oracle() {
    // (4π / 16π^{3/2}) · (4π − 2π) = √π / 2
    let m = hawking_mass_from(4.0 * PI, 2.0 * PI, HawkingConvention::Area);
    assert!((m - PI.sqrt() / 2.0).abs() < 1e-15);
    let m = hawking_mass_from(4.0 * PI, 2.0 * PI, HawkingConvention::SqrtArea);
    assert!((m - (4.0 * PI).sqrt() * 2.0 * PI / (16.0 * PI.powf(1.5))).abs() < 1e-15);
}

proptest! {
    #[test]
    fn hawking_sign_tracks_energy(a in 1e-3f64..1e3, w in 0.0f64..40.0) {
        for conv in [HawkingConvention::Area, HawkingConvention::SqrtArea] {
            let m = hawking_mass_from(a, w, conv);
            prop_assert_eq!(m >= 0.0, w <= 4.0 * PI);
            prop_assert_eq!(m > 0.0, w < 4.0 * PI);
        }
    }
}
