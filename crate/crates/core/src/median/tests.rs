use super::*;
use crate::body::Body;

fn l1(dim: usize) -> Body {
    Body::lp_ball(dim, 1.0).unwrap()
}

#[test]
fn two_point_objective_at_endpoint() {
    let body = Body::lp_ball(3, 4.0).unwrap();
    let p1 = vec![0.2, -0.4, 1.0];
    let p2 = vec![-1.0, 0.5, 0.3];
    let wp = WeightedPoints::uniform(vec![p1.clone(), p2.clone()]).unwrap();
    let expect = 0.5 * body.gauge(&linalg::sub(&p1, &p2));
    assert!((objective(&body, &wp, &p1) - expect).abs() < 1e-15);
}

#[test]
fn unit_square_example_values() {
    let wp = WeightedPoints::uniform(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let body = l1(2);
    assert_eq!(objective(&body, &wp, &[0.0, 0.0]), 1.0);
    assert_eq!(objective(&body, &wp, &[0.5, 0.5]), 1.0);
}

#[test]
fn single_point_objective_vanishes() {
    let wp = WeightedPoints::uniform(vec![vec![1.0, 2.0, 3.0]]).unwrap();
    let body = Body::euclidean_ball(3).unwrap();
    assert_eq!(objective(&body, &wp, &[1.0, 2.0, 3.0]), 0.0);
}

#[test]
fn symmetric_subgradient_vanishes_at_centroid() {
    let body = Body::euclidean_ball(2).unwrap();
    let s = 3f64.sqrt() / 2.0;
    let pts = vec![vec![1.0, 0.0], vec![-0.5, s], vec![-0.5, -s]];
    let wp = WeightedPoints::uniform(pts).unwrap();
    let g = objective_subgradient(&body, &wp, &[0.0, 0.0], TieRule::Average).unwrap();
    assert!(linalg::norm(&g) < 1e-12);
}

#[test]
fn midpoint_subgradients_cancel() {
    let body = Body::lp_ball(3, 3.0).unwrap();
    let wp = WeightedPoints::uniform(vec![vec![1.0, 2.0, 0.0], vec![-1.0, 0.0, 2.0]]).unwrap();
    let g = objective_subgradient(&body, &wp, &[0.0, 1.0, 1.0], TieRule::Average).unwrap();
    assert!(linalg::norm(&g) < 1e-12);
}

#[test]
fn subgradient_rejects_data_point() {
    let body = Body::euclidean_ball(2).unwrap();
    let wp = WeightedPoints::uniform(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
    assert!(matches!(
        objective_subgradient(&body, &wp, &[1.0, 0.0], TieRule::Average),
        Err(Error::Domain(_))
    ));
}

#[test]
fn heavier_endpoint_wins() {
    let body = Body::lp_ball(3, 1.5).unwrap();
    let p1 = vec![0.3, 0.1, -0.2];
    let p2 = vec![-0.4, 0.9, 0.5];
    let wp = WeightedPoints::new(vec![p1.clone(), p2.clone()], vec![0.7, 0.3]).unwrap();
    let r = solve_unconstrained(&body, &wp).unwrap();
    assert!(r.is_converged());
    assert!(linalg::dist(&r.minimizer, &p1) < 1e-12);
    assert!((r.value - 0.3 * body.gauge(&linalg::sub(&p1, &p2))).abs() < 1e-12);
}

#[test]
fn equilateral_triangle_centroid() {
    let body = Body::euclidean_ball(2).unwrap();
    let s = 3f64.sqrt() / 2.0;
    let pts = vec![vec![1.0, 0.0], vec![-0.5, s], vec![-0.5, -s]];
    let wp = WeightedPoints::uniform(pts).unwrap();
    let r = solve_unconstrained(&body, &wp).unwrap();
    assert!(r.is_converged());
    assert!(linalg::norm(&r.minimizer) < 1e-5, "{:?}", r);
}

#[test]
fn l1_corner_median() {
    // Coordinatewise medians of (0,0), (1,0), (0,1) are (0, 0): value 2/3.
    let wp = WeightedPoints::uniform(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let r = solve_unconstrained(&l1(2), &wp).unwrap();
    assert!(linalg::norm(&r.minimizer) < 1e-9);
    assert!((r.value - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn unit_square_minimum_is_one() {
    let wp = WeightedPoints::uniform(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let r = solve_unconstrained(&l1(2), &wp).unwrap();
    assert!((r.value - 1.0).abs() < 1e-8);
}

#[test]
fn constrained_matches_when_minimizer_in_hull() {
    let body = Body::euclidean_ball(3).unwrap();
    let wp = WeightedPoints::uniform(vec![
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![0.2, 0.2, 0.9],
    ])
    .unwrap();
    let u = solve_unconstrained(&body, &wp).unwrap();
    let c = solve_constrained(&body, &wp, &Region::Hull).unwrap();
    assert!((u.value - c.value).abs() < 1e-8);
}

#[test]
fn weiszfeld_examples() {
    let s = 3f64.sqrt() / 2.0;
    let wp = WeightedPoints::uniform(vec![vec![1.0, 0.0], vec![-0.5, s], vec![-0.5, -s]]).unwrap();
    let r = weiszfeld(&wp).unwrap();
    assert!(linalg::norm(&r.minimizer) < 1e-8);

    let wp = WeightedPoints::uniform(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
    let r = weiszfeld(&wp).unwrap();
    assert!(linalg::dist(&r.minimizer, &[1.0, 1.0]) < 1e-12);
}

#[test]
fn weighted_points_validation() {
    assert!(WeightedPoints::new(vec![], vec![]).is_err());
    assert!(WeightedPoints::new(vec![vec![0.0, 0.0]], vec![0.5]).is_err());
    assert!(WeightedPoints::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]], vec![0.5, 0.5]).is_err());
    assert!(WeightedPoints::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]], vec![1.5, -0.5]).is_err());
    assert!(WeightedPoints::normalized(vec![vec![0.0, 0.0], vec![1.0, 0.0]], vec![2.0, 6.0]).is_ok());
}

#[test]
fn data_point_anchor_detected() {
    let body = Body::euclidean_ball(2).unwrap();
    let wp = WeightedPoints::new(
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
        vec![0.6, 0.2, 0.2],
    )
    .unwrap();
    assert!(data_point_optimal(&body, &wp, 0));
    assert!(!data_point_optimal(&body, &wp, 1));
}

mod properties {
    use super::*;
    use crate::linalg;
    use proptest::prelude::*;

    fn body(i: usize, dim: usize) -> Body {
        match i {
            0 => Body::euclidean_ball(dim).unwrap(),
            1 => Body::lp_ball(dim, 1.0).unwrap(),
            2 => Body::lp_ball(dim, 3.5).unwrap(),
            3 => Body::cube(dim).unwrap(),
            _ => Body::lp_ball_scaled(1.7, (0..dim).map(|k| 0.5 + k as f64).collect()).unwrap(),
        }
    }

    fn instance(dim: usize, max: usize) -> impl Strategy<Value = WeightedPoints> {
        (
            prop::collection::vec(prop::collection::vec(-2.0..2.0f64, dim), 1..=max),
            prop::collection::vec(0.05..1.0f64, max),
        )
            .prop_filter_map("distinct points", |(pts, w)| {
                let n = pts.len();
                WeightedPoints::normalized(pts, w[..n].to_vec()).ok()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn two_point_closed_form(i in 0usize..5, a in prop::collection::vec(-2.0..2.0f64, 3),
                                 b in prop::collection::vec(-2.0..2.0f64, 3), w in 0.05..0.95f64) {
            prop_assume!(linalg::dist(&a, &b) > 1e-3);
            let k = body(i, 3);
            let wp = WeightedPoints::new(vec![a.clone(), b.clone()], vec![w, 1.0 - w]).unwrap();
            let r = solve_unconstrained(&k, &wp).unwrap();
            let want = w.min(1.0 - w) * k.gauge(&linalg::sub(&a, &b));
            prop_assert!((r.value - want).abs() <= 1e-8);
        }

        #[test]
        fn minimum_dominance(i in 0usize..5, wp in instance(3, 6)) {
            let k = body(i, 3);
            let free = solve_unconstrained(&k, &wp).unwrap();
            let held = solve_constrained(&k, &wp, &Region::Hull).unwrap();
            prop_assert!(free.is_converged() && held.is_converged());
            prop_assert!((free.value - objective(&k, &wp, &free.minimizer)).abs() <= 1e-12);
            prop_assert!(free.lower_bound <= free.value);
            for p in wp.points() {
                prop_assert!(free.value <= objective(&k, &wp, p) + 1e-9);
            }
            prop_assert!(free.value <= held.value + 1e-9);
        }

        #[test]
        fn aggregated_subgradient_supports_the_objective(i in 0usize..5, wp in instance(3, 5),
                xi in prop::collection::vec(-2.0..2.0f64, 3), y in prop::collection::vec(-3.0..3.0f64, 3)) {
            let k = body(i, 3);
            let g = objective_subgradient(&k, &wp, &xi, TieRule::Average).unwrap();
            let lhs = objective(&k, &wp, &y);
            let rhs = objective(&k, &wp, &xi) + linalg::dot(&g, &linalg::sub(&y, &xi));
            prop_assert!(lhs >= rhs - 1e-8);
        }

        #[test]
        fn linear_invariance(i in 0usize..5, wp in instance(3, 5), m in prop::collection::vec(-1.0..1.0f64, 9)) {
            let k = body(i, 3);
            let t = nalgebra::DMatrix::from_row_slice(3, 3, &m) + nalgebra::DMatrix::identity(3, 3) * 2.5;
            let inv = t.clone().try_inverse().unwrap();
            let image = k.apply_linear_matrix(t.clone()).unwrap();
            let pulled = wp.map_points(|p| linalg::mat_vec(&inv, p)).unwrap();
            let a = solve_unconstrained(&image, &wp).unwrap();
            let b = solve_unconstrained(&k, &pulled).unwrap();
            prop_assert!((a.value - b.value).abs() <= 1e-6);
            let pushed = linalg::mat_vec(&t, &b.minimizer);
            prop_assert!((objective(&image, &wp, &pushed) - a.value).abs() <= 1e-6);
        }

        #[test]
        fn grid_bound_is_sound_and_monotone(i in 0usize..5, wp in instance(2, 4)) {
            let k = body(i, 2);
            let held = solve_constrained(&k, &wp, &Region::Hull).unwrap();
            let mut last = f64::NEG_INFINITY;
            for h in [0.2, 0.1, 0.05] {
                let b = certified_lower_bound(&k, &wp, &BoundRegion::Hull, h).unwrap();
                prop_assert!(b <= held.value + 1e-12);
                prop_assert!(b >= last - 1e-12);
                last = b;
            }
        }
    }
}
