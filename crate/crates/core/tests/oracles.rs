//! Closed-form oracle suite for the map construction: the polygonal disk
//! must reproduce the identity, the off-center disk its Moebius map, and the
//! composed stages must behave like one analytic bijection.

use convmap_core::conformal::{
    build_geodesic_map, eval_offcenter_oracle, ConformalMap, ElementaryMap,
};
use convmap_core::domains::make_unit_disk;
use convmap_core::geometry::{JordanDomain, Point};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

fn disk_map(nodes: usize) -> ConformalMap {
    build_geodesic_map(&make_unit_disk(nodes).unwrap())
        .unwrap()
        .normalize_at_origin()
        .unwrap()
}

fn interior_grid(radius: f64, per_axis: usize) -> Vec<Point> {
    let mut out = Vec::new();
    for i in 0..per_axis {
        for j in 0..per_axis {
            let z = Point::new(
                -radius + 2.0 * radius * i as f64 / (per_axis - 1) as f64,
                -radius + 2.0 * radius * j as f64 / (per_axis - 1) as f64,
            );
            if z.norm() <= radius {
                out.push(z);
            }
        }
    }
    out
}

fn sup_identity_error(map: &ConformalMap, radius: f64) -> f64 {
    interior_grid(radius, 41)
        .into_iter()
        .map(|z| (map.eval(z).unwrap() - z).norm())
        .fold(0.0, f64::max)
}

#[test]
fn disk_oracle_accuracy_and_refinement() {
    let mut errors = Vec::new();
    for nodes in [128usize, 256, 512, 1024] {
        errors.push((nodes, sup_identity_error(&disk_map(nodes), 0.9)));
    }
    let at = |n: usize| errors.iter().find(|e| e.0 == n).unwrap().1;
    assert!(at(512) <= 1e-2, "512-node disk error {}", at(512));
    // Non-increasing within 10% slack across refinement.
    for w in errors.windows(2) {
        assert!(
            w[1].1 <= w[0].1 * 1.1,
            "error grew under refinement: {errors:?}"
        );
    }
    // At least halving when the node count doubles.
    assert!(
        at(1024) <= at(512) * 0.55,
        "refinement too slow: {errors:?}"
    );
}

#[test]
fn offcenter_disk_matches_moebius_oracle() {
    let c = Point::new(0.4, 0.0);
    let r = 1.5;
    let nodes: Vec<Point> = (0..1024)
        .map(|k| c + Point::from_polar(r, TAU * k as f64 / 1024.0))
        .collect();
    let domain = JordanDomain::new(nodes, 1e-9).unwrap();
    let map = build_geodesic_map(&domain)
        .unwrap()
        .normalize_at_origin()
        .unwrap();
    let mut sup: f64 = 0.0;
    for z in interior_grid(0.9, 41) {
        sup = sup.max((map.eval(z).unwrap() - eval_offcenter_oracle(c, r, z)).norm());
    }
    assert!(sup <= 1e-2, "off-center oracle error {sup}");
    // Boundary images match the closed form too.
    let mut bd_sup: f64 = 0.0;
    for (idx, z) in domain.nodes().iter().enumerate() {
        let got = map.boundary_value(idx).unwrap();
        bd_sup = bd_sup.max((got - eval_offcenter_oracle(c, r, *z)).norm());
    }
    assert!(bd_sup <= 1e-2, "boundary correspondence error {bd_sup}");
}

#[test]
fn eval_examples_on_the_disk_oracle() {
    let map = disk_map(512);
    assert!(map.eval(Point::new(0.0, 0.0)).unwrap().norm() <= 1e-9);
    let w = map.eval(Point::new(0.5, 0.0)).unwrap();
    assert!((w - Point::new(0.5, 0.0)).norm() <= 1e-2);
    let z = map.eval_inverse(Point::new(0.0, 0.3)).unwrap();
    assert!((z - Point::new(0.0, 0.3)).norm() <= 1e-2);
    assert!(map.eval(Point::new(2.0, 0.0)).is_err());
    assert!(map.eval_inverse(Point::new(1.5, 0.0)).is_err());
}

#[test]
fn round_trip_within_1e9_on_random_points() {
    for map in [disk_map(256), disk_map(512)] {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let w = loop {
                let w = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                if w.norm() <= 0.99 {
                    break w;
                }
            };
            let z = map.eval_inverse(w).unwrap();
            let back = map.eval(z).unwrap();
            assert!(
                (back - w).norm() <= 1e-9,
                "round trip residual {} at {w}",
                (back - w).norm()
            );
        }
    }
}

#[test]
fn derivative_at_origin_examples() {
    // Identity stages give derivative 1.
    let disk = make_unit_disk(64).unwrap();
    let ident = ConformalMap::from_stages(&disk, vec![], false);
    let d = ident.derivative_at_origin(0.25, 256).unwrap();
    assert!((d - Point::new(1.0, 0.0)).norm() <= 1e-12);
    // A pure rotation has derivative e^{i alpha}.
    let rot = ConformalMap::from_stages(&disk, vec![ElementaryMap::Rotation { theta: 0.9 }], false);
    let d = rot.derivative_at_origin(0.25, 256).unwrap();
    assert!((d - Point::from_polar(1.0, 0.9)).norm() <= 1e-12);
    // Normalized map of the radius-R disk has derivative 1/R.
    let big: Vec<Point> = (0..512)
        .map(|k| Point::from_polar(2.0, TAU * k as f64 / 512.0))
        .collect();
    let domain = JordanDomain::new(big, 1e-9).unwrap();
    let map = build_geodesic_map(&domain)
        .unwrap()
        .normalize_at_origin()
        .unwrap();
    let d = map.derivative_at_origin(0.25, 256).unwrap();
    assert!((d - Point::new(0.5, 0.0)).norm() <= 1e-3, "got {d}");
    // Radius exceeding the domain is rejected.
    assert!(ident.derivative_at_origin(1.5, 64).is_err());
}

#[test]
fn normalization_is_idempotent_and_cancels_rotations() {
    let map = disk_map(256);
    let again = map.normalize_at_origin().unwrap();
    // The appended stages must be identity-equivalent.
    let tail = &again.stages()[again.stages().len() - 2..];
    match tail {
        [ElementaryMap::DiskAutomorphism { w0 }, ElementaryMap::Rotation { theta }] => {
            assert!(
                w0.norm() <= 1e-9,
                "second automorphism |w0| = {}",
                w0.norm()
            );
            assert!(theta.abs() <= 1e-6, "second rotation angle {theta}");
        }
        other => panic!("unexpected normalization tail {other:?}"),
    }
    // An artificial pre-rotation is cancelled by normalization.
    let disk = make_unit_disk(256).unwrap();
    let mut stages = build_geodesic_map(&disk).unwrap().stages().to_vec();
    stages.push(ElementaryMap::Rotation { theta: 0.7 });
    let twisted = ConformalMap::from_stages(&disk, stages, false);
    let fixed = twisted.normalize_at_origin().unwrap();
    let d = fixed.derivative_at_origin(0.25, 256).unwrap();
    assert!(d.re > 0.0 && d.im.abs() <= 1e-6 * d.norm());
    assert!(fixed.eval(Point::new(0.0, 0.0)).unwrap().norm() <= 1e-9);
}

#[test]
fn conformality_probe_discrete_cauchy_riemann() {
    let map = disk_map(512);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = 1e-5;
    for _ in 0..50 {
        let z = loop {
            let z = Point::new(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8));
            if z.norm() < 0.8 {
                break z;
            }
        };
        let f = map.eval(z).unwrap();
        let fx = (map.eval(z + Point::new(h, 0.0)).unwrap() - f) / h;
        let fy = (map.eval(z + Point::new(0.0, h)).unwrap() - f) / Point::new(0.0, h);
        assert!(
            (fx - fy).norm() <= 1e-4 * fx.norm().max(1e-12),
            "Cauchy-Riemann residual {} at {z}",
            (fx - fy).norm()
        );
    }
}

#[test]
fn maximum_modulus_on_interior_grid() {
    let map = disk_map(256);
    let node_max = map
        .node_images()
        .iter()
        .map(|w| w.norm())
        .fold(0.0, f64::max);
    let interior_max = interior_grid(0.97, 61)
        .into_iter()
        .map(|z| map.eval(z).unwrap().norm())
        .fold(0.0, f64::max);
    assert!(
        interior_max <= node_max + 1e-6,
        "interior modulus {interior_max} exceeds boundary max {node_max}"
    );
}

#[test]
fn octagon_with_midpoint_nodes_builds_and_lands_on_circle() {
    // Geometrically an 8-gon; midpoints bring the node count to the
    // constructor's minimum of 16.
    let mut nodes = Vec::new();
    for k in 0..8 {
        let a = Point::from_polar(1.0, TAU * k as f64 / 8.0);
        let b = Point::from_polar(1.0, TAU * (k + 1) as f64 / 8.0);
        nodes.push(a);
        nodes.push((a + b) / 2.0);
    }
    let domain = JordanDomain::new(nodes, 1e-9).unwrap();
    let map = build_geodesic_map(&domain).unwrap();
    for (idx, _) in domain.nodes().iter().enumerate() {
        let w = map.boundary_value(idx).unwrap();
        assert!(
            (w.norm() - 1.0).abs() <= 1e-6,
            "node image {w} off the circle"
        );
    }
    assert!(build_geodesic_map(&make_unit_disk(16).unwrap()).is_ok());
}

#[test]
fn boundary_images_cyclically_monotone_on_oracles() {
    for map in [disk_map(128), disk_map(512)] {
        assert!(convmap_core::convergence::boundary_images_cyclically_monotone(&map));
    }
}

#[test]
fn normalize_rejects_origin_image_on_the_circle() {
    use convmap_core::conformal::ConformalError;
    let disk = make_unit_disk(64).unwrap();
    // An automorphism that throws the origin almost onto the circle signals
    // an upstream failure; normalization must refuse it.
    let broken = ConformalMap::from_stages(
        &disk,
        vec![ElementaryMap::DiskAutomorphism {
            w0: Point::new(-0.9999995, 0.0),
        }],
        false,
    );
    assert!(matches!(
        broken.normalize_at_origin(),
        Err(ConformalError::OriginImageOutsideDisk { .. })
    ));
}

#[test]
fn boundary_value_index_out_of_range() {
    use convmap_core::conformal::ConformalError;
    let map = disk_map(64);
    assert!(map.boundary_value(63).is_ok());
    assert!(matches!(
        map.boundary_value(64),
        Err(ConformalError::IndexOutOfRange { index: 64, len: 64 })
    ));
}
