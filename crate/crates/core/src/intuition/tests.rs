use super::*;
use crate::median::solve_unconstrained;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn weight_of(wp: &WeightedPoints, p: &[f64]) -> f64 {
    wp.points()
        .iter()
        .zip(wp.weights())
        .find(|(q, _)| linalg::dist(q, p) < 1e-12)
        .map_or(0.0, |(_, w)| *w)
}

#[test]
fn disc_weights_match_closed_form() {
    let disc = Body::euclidean_ball(2).unwrap();
    let h = 0.5f64.sqrt();
    let wp = construct_median_weights(&disc, &[1.0, 0.0], &[0.0, 1.0], &[-h, -h]).unwrap();
    let wz = 1.0 / (1.0 + 2.0f64.sqrt());
    assert!(close(weight_of(&wp, &[-h, -h]), wz, 1e-12));
    assert!(close(weight_of(&wp, &[1.0, 0.0]), h * wz, 1e-12));
    assert!(close(weight_of(&wp, &[0.0, 1.0]), h * wz, 1e-12));
    let r = solve_unconstrained(&disc, &wp).unwrap();
    assert!(r.value >= objective(&disc, &wp, &[0.0, 0.0]) - 1e-9);
}

#[test]
fn antipodal_z_gives_two_equal_weights() {
    let disc = Body::euclidean_ball(2).unwrap();
    let wp = construct_median_weights(&disc, &[1.0, 0.0], &[0.0, 1.0], &[-1.0, 0.0]).unwrap();
    assert_eq!(wp.len(), 2);
    assert!(close(weight_of(&wp, &[-1.0, 0.0]), 0.5, 1e-15));
    assert!(close(weight_of(&wp, &[1.0, 0.0]), 0.5, 1e-15));
    // F is constant on the segment between the two points.
    let f0 = objective(&disc, &wp, &[0.0, 0.0]);
    assert!(close(objective(&disc, &wp, &[0.4, 0.0]), f0, 1e-15));
}

#[test]
fn l1_weights_with_averaged_generators() {
    let l1 = Body::lp_ball(2, 1.0).unwrap();
    let avg = GeneratorChoice::Average;
    let (wp, grads) = construct_median_weights_with(
        &l1,
        [&[1.0, 0.0], &[0.0, 1.0], &[-0.5, -0.5]],
        [&avg, &avg, &GeneratorChoice::Smallest],
    )
    .unwrap();
    for w in wp.weights() {
        assert!(close(*w, 1.0 / 3.0, 1e-15));
    }
    let mut sum = vec![0.0; 2];
    for (g, w) in grads.iter().zip(wp.weights()) {
        linalg::axpy(&mut sum, *w, g);
    }
    assert!(linalg::norm(&sum) < 1e-15);
    // Coordinatewise weighted median of {−½, 1, 0} and {−½, 0, 1} is 0.
    let r = solve_unconstrained(&l1, &wp).unwrap();
    assert!(close(r.value, objective(&l1, &wp, &[0.0, 0.0]), 1e-9));
}

#[test]
fn dependent_generators_are_rejected() {
    let disc = Body::euclidean_ball(2).unwrap();
    let err = construct_median_weights(&disc, &[1.0, 0.0], &[-1.0, 0.0], &[0.0, 1.0]).unwrap_err();
    assert!(matches!(err, Error::Domain(ref m) if m.contains("determinant")));
}

#[test]
fn off_boundary_points_are_rejected() {
    let disc = Body::euclidean_ball(2).unwrap();
    assert!(construct_median_weights(&disc, &[2.0, 0.0], &[0.0, 1.0], &[-1.0, 0.0]).is_err());
}

#[test]
fn ellipsoid_instance_is_intuitive() {
    let body = Body::ellipsoid_axes(&[1.0, 2.0, 0.5]).unwrap();
    let wp = WeightedPoints::new(
        vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        vec![0.2, 0.3, 0.5],
    )
    .unwrap();
    let out = check_intuitive(&body, &wp, 1e-6).unwrap();
    assert_eq!(out.verdict, Verdict::IntuitiveAtTol);
    assert!(out.gap <= 1e-6);
}

#[test]
fn l1_unit_vectors_violate_the_hull_property() {
    // Median value 1 at the origin; the triangle only reaches 4/3.
    let l1 = Body::lp_ball(3, 1.0).unwrap();
    let wp = WeightedPoints::uniform(vec![
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0],
    ])
    .unwrap();
    let out = check_intuitive(&l1, &wp, 1e-6).unwrap();
    assert_eq!(out.verdict, Verdict::Violated);
    assert!(close(out.gap, 1.0 / 3.0, 1e-8));
    let w = out.certificate.unwrap();
    assert!(w.gap > 0.0);
    assert!(w.value < w.lower_bound);
    let again = w.recertify().unwrap();
    assert!(close(again, w.gap, 1e-15));
    let round = Witness::from_json(&w.to_json()).unwrap();
    assert_eq!(round, w);
}

#[test]
fn two_points_are_affinely_intuitive() {
    let l1 = Body::lp_ball(3, 1.0).unwrap();
    let wp = WeightedPoints::new(vec![vec![0.0, 0.0, 0.0], vec![1.0, 2.0, -1.0]], vec![0.3, 0.7]).unwrap();
    let out = check_affine(&l1, &wp, 1e-6).unwrap();
    assert_eq!(out.verdict, Verdict::IntuitiveAtTol);
}

#[test]
fn full_span_is_trivially_affine_intuitive() {
    let l1 = Body::lp_ball(2, 1.0).unwrap();
    let wp = WeightedPoints::uniform(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let out = check_affine(&l1, &wp, 1e-6).unwrap();
    assert_eq!(out.verdict, Verdict::IntuitiveAtTol);
    assert_eq!(out.gap, 0.0);
}

#[test]
fn trial_instances_are_reproducible() {
    let cfg = SearchConfig {
        seed: 11,
        ..SearchConfig::default()
    };
    let a = trial_instance(&cfg, 3, 5).unwrap();
    let b = trial_instance(&cfg, 3, 5).unwrap();
    let c = trial_instance(&cfg, 3, 6).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn tampered_witness_fails_recertification() {
    let l1 = Body::lp_ball(3, 1.0).unwrap();
    let wp = WeightedPoints::uniform(vec![
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0],
    ])
    .unwrap();
    let mut w = check_intuitive(&l1, &wp, 1e-6).unwrap().certificate.unwrap();
    // Moving the escaped point into the hull must break the certificate.
    w.escaped = vec![1.0 / 3.0; 3];
    assert!(w.recertify().is_err());
}

#[test]
fn search_rejects_planar_bodies() {
    let disc = Body::euclidean_ball(2).unwrap();
    assert!(search_witness(&disc, &SearchConfig::default()).is_err());
}
