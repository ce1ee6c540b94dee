use super::*;
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn diag_ellipsoid() -> Body {
    Body::ellipsoid(vec![
        vec![1.0, 0.0, 0.0],
        vec![0.0, 0.25, 0.0],
        vec![0.0, 0.0, 1.0 / 9.0],
    ])
    .unwrap()
}

fn stretched_ball() -> Body {
    Body::euclidean_ball(3)
        .unwrap()
        .apply_linear(vec![vec![2.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]])
        .unwrap()
}

#[test]
fn gauge_examples() {
    assert!(close(Body::euclidean_ball(3).unwrap().gauge(&[3.0, 4.0, 0.0]), 5.0, 1e-15));
    assert!(close(Body::lp_ball(3, 1.0).unwrap().gauge(&[1.0, 1.0, 1.0]), 3.0, 1e-15));
    assert!(close(diag_ellipsoid().gauge(&[0.0, 2.0, 0.0]), 1.0, 1e-15));
    assert!(close(stretched_ball().gauge(&[2.0, 0.0, 0.0]), 1.0, 1e-15));
}

#[test]
fn dual_gauge_examples() {
    assert!(close(Body::lp_ball(3, 1.0).unwrap().dual_gauge(&[1.0, 2.0, 3.0]), 3.0, 1e-12));
    assert!(close(Body::euclidean_ball(3).unwrap().dual_gauge(&[3.0, 4.0, 0.0]), 5.0, 1e-12));
    assert!(close(diag_ellipsoid().dual_gauge(&[0.0, 1.0, 0.0]), 2.0, 1e-12));
}

#[test]
fn l1_subdifferential_on_an_axis_is_a_segment() {
    let l1 = Body::lp_ball(2, 1.0).unwrap();
    let set = l1.subdifferential(&[1.0, 0.0]).unwrap();
    let mut gens = set.generators().to_vec();
    gens.sort_by(|a, b| a[1].total_cmp(&b[1]));
    assert_eq!(gens, vec![vec![1.0, -1.0], vec![1.0, 1.0]]);
    assert!(set.contains(&[1.0, 0.3], 1e-12));
    assert!(!set.contains(&[0.9, 0.0], 1e-6));
}

#[test]
fn euclidean_subdifferential_is_the_unit_vector() {
    let set = Body::euclidean_ball(3).unwrap().subdifferential(&[3.0, 4.0, 0.0]).unwrap();
    match set.kind {
        SubgradientKind::Smooth(g) => {
            assert!(close(g[0], 0.6, 1e-15) && close(g[1], 0.8, 1e-15) && g[2] == 0.0)
        }
        other => panic!("expected a gradient, got {other:?}"),
    }
}

#[test]
fn subdifferential_at_origin_is_rejected() {
    let err = Body::euclidean_ball(2).unwrap().subdifferential(&[0.0, 0.0]).unwrap_err();
    assert!(matches!(err, Error::Domain(_)));
}

#[test]
fn coordinate_section_of_cross_polytope() {
    let l1 = Body::lp_ball(3, 1.0).unwrap();
    let frame = SectionFrame::new(vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]).unwrap();
    let s = l1.section(&frame).unwrap();
    assert_eq!(s.dim(), 2);
    let flat = Body::lp_ball(2, 1.0).unwrap();
    for x in [[1.0, 2.0], [-0.3, 0.7], [0.0, -4.0]] {
        assert!(close(s.gauge(&x), flat.gauge(&x), 1e-12));
    }
}

#[test]
fn ellipsoid_section_restricts_the_form() {
    let e = diag_ellipsoid();
    let frame = SectionFrame::from_normal(&[1.0, 1.0, 1.0]).unwrap();
    let s = e.section(&frame).unwrap();
    assert_eq!(s.kind(), "ellipsoid");
    let Shape::Ellipsoid { matrix, .. } = s.shape() else {
        unreachable!()
    };
    let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.25, 1.0 / 9.0]));
    for i in 0..2 {
        for j in 0..2 {
            let vi = nalgebra::DVector::from_vec(frame.basis[i].clone());
            let vj = nalgebra::DVector::from_vec(frame.basis[j].clone());
            assert!(close(matrix[(i, j)], (vi.transpose() * &a * vj)[0], 1e-14));
        }
    }
}

#[test]
fn identity_map_changes_nothing() {
    let l4 = Body::lp_ball(3, 4.0).unwrap();
    let same = l4
        .apply_linear(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]])
        .unwrap();
    for x in [[0.3, -1.0, 2.0], [1.0, 1.0, 1.0]] {
        assert!(close(same.gauge(&x), l4.gauge(&x), 1e-15));
    }
}

#[test]
fn singular_map_is_rejected() {
    let ball = Body::euclidean_ball(2).unwrap();
    assert!(ball.apply_linear(vec![vec![1.0, 2.0], vec![2.0, 4.0]]).is_err());
}

#[test]
fn norm_equivalence_examples() {
    let b = Body::euclidean_ball(3).unwrap().norm_equivalence_constants();
    assert!(close(b.lower, 1.0, 1e-12) && close(b.upper, 1.0, 1e-12));
    let b = Body::lp_ball(3, 1.0).unwrap().norm_equivalence_constants();
    assert!(close(b.lower, 1.0, 1e-9) && close(b.upper, 3.0f64.sqrt(), 1e-9));
    let b = diag_ellipsoid().norm_equivalence_constants();
    assert!(close(b.lower, 1.0 / 3.0, 1e-12) && close(b.upper, 1.0, 1e-12));
}

#[test]
fn sampled_constants_bracket_the_gauge() {
    let body = Body::lp_ball_scaled(3.0, vec![1.0, 2.0, 0.5]).unwrap();
    let b = body.norm_equivalence_constants();
    assert!(b.lower > 0.0 && b.lower <= b.upper);
    for v in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.6, 0.0, 0.8]] {
        let g = body.gauge(&v);
        assert!(b.lower <= g + 1e-12 && g <= b.upper + 1e-12);
    }
}

#[test]
fn boundary_point_examples() {
    let p = Body::euclidean_ball(3).unwrap().boundary_point(&[3.0, 4.0, 0.0]).unwrap();
    assert!(close(p[0], 0.6, 1e-15) && close(p[1], 0.8, 1e-15));
    let p = Body::lp_ball(3, 1.0).unwrap().boundary_point(&[1.0, 1.0, 1.0]).unwrap();
    assert!(p.iter().all(|c| close(*c, 1.0 / 3.0, 1e-15)));
    assert!(Body::lp_ball(3, 1.0).unwrap().boundary_point(&[0.0; 3]).is_err());
}

#[test]
fn invalid_bodies_are_rejected() {
    assert!(Body::ellipsoid(vec![vec![1.0, 0.0], vec![0.0, -1.0]]).is_err());
    assert!(Body::lp_ball(3, 0.5).is_err());
    assert!(Body::h_polytope(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).is_err());
}

#[test]
fn body_json_round_trip() {
    let frame = SectionFrame::from_normal(&[0.2, -0.4, 1.0]).unwrap();
    let body = stretched_ball().section(&frame).unwrap();
    let text = serde_json::to_string(&body).unwrap();
    let back: Body = serde_json::from_str(&text).unwrap();
    assert_eq!(back, body);
    assert!(serde_json::from_str::<Body>(r#"{"type":"lp_ball","p":2,"scales":[1,1],"extra":1}"#).is_err());
}

fn bodies() -> Vec<Body> {
    let frame = SectionFrame::from_normal(&[0.3, -0.5, 0.8]).unwrap();
    vec![
        Body::euclidean_ball(3).unwrap(),
        diag_ellipsoid(),
        Body::lp_ball(3, 1.0).unwrap(),
        Body::lp_ball(3, 4.0).unwrap(),
        Body::cube(3).unwrap(),
        Body::h_polytope(vec![vec![1.0, 0.5, 0.0], vec![0.0, 1.0, -0.7], vec![0.2, 0.1, 1.2], vec![0.9, -0.9, 0.3]])
            .unwrap(),
        Body::v_polytope(vec![vec![1.0, 0.2, 0.0], vec![0.0, 1.0, 0.4], vec![0.3, 0.0, 1.5], vec![0.7, -0.8, 0.6]])
            .unwrap(),
        stretched_ball(),
        Body::lp_ball(3, 1.0).unwrap().section(&frame).unwrap(),
        Body::lp_ball(3, 4.0).unwrap().section(&frame).unwrap(),
    ]
}

fn vec3() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, 3)
}

fn take(v: &[f64], dim: usize) -> Vec<f64> {
    v[..dim].to_vec()
}

proptest! {
    #[test]
    fn gauge_axioms(i in 0usize..10, x in vec3(), y in vec3(), c in 0.01..20.0f64) {
        let body = &bodies()[i];
        let d = body.dim();
        let (x, y) = (take(&x, d), take(&y, d));
        prop_assume!(linalg::norm(&x) > 1e-6);
        let gx = body.gauge(&x);
        prop_assert!(gx > 0.0);
        prop_assert!((body.gauge(&linalg::scale(&x, c)) - c * gx).abs() <= 1e-10 * c.max(1.0) * gx.max(1.0));
        prop_assert_eq!(body.gauge(&linalg::scale(&x, -1.0)), gx);
        prop_assert!(body.gauge(&linalg::add(&x, &y)) <= gx + body.gauge(&y) + 1e-10);
    }

    #[test]
    fn subgradients_support_the_gauge(i in 0usize..10, p in vec3(), y in vec3(), c in 0.1..10.0f64) {
        let body = &bodies()[i];
        let d = body.dim();
        let (p, y) = (take(&p, d), take(&y, d));
        prop_assume!(linalg::norm(&p) > 1e-6);
        let gp = body.gauge(&p);
        let set = body.subdifferential(&p).unwrap();
        let scaled = body.subdifferential(&linalg::scale(&p, c)).unwrap();
        let neg = body.subdifferential(&linalg::scale(&p, -1.0)).unwrap();
        for g in set.generators() {
            prop_assert!(body.gauge(&y) >= gp + dot(g, &linalg::sub(&y, &p)) - 1e-9);
            prop_assert!(body.gauge(&linalg::sub(&y, &p)) >= gp - dot(g, &y) - 1e-9);
            prop_assert!((dot(g, &p) - gp).abs() <= 1e-10 * gp.max(1.0));
            prop_assert!((body.dual_gauge(g) - 1.0).abs() <= 1e-9);
            prop_assert!(scaled.contains(g, 1e-9));
            prop_assert!(neg.contains(&linalg::scale(g, -1.0), 1e-9));
        }
    }

    #[test]
    fn dual_pairing(i in 0usize..10, x in vec3(), g in vec3()) {
        let body = &bodies()[i];
        let d = body.dim();
        let (x, g) = (take(&x, d), take(&g, d));
        prop_assert!(dot(&g, &x) <= body.dual_gauge(&g) * body.gauge(&x) + 1e-10);
    }

    #[test]
    fn boundary_points_have_unit_gauge(i in 0usize..10, v in vec3()) {
        let body = &bodies()[i];
        let v = take(&v, body.dim());
        prop_assume!(linalg::norm(&v) > 1e-6);
        let z = body.boundary_point(&v).unwrap();
        prop_assert!((body.gauge(&z) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn section_gauge_agrees_with_the_body(i in 0usize..8, n in vec3(), st in prop::collection::vec(-3.0..3.0f64, 2)) {
        let body = &bodies()[i];
        prop_assume!(linalg::norm(&n) > 1e-3);
        let frame = SectionFrame::from_normal(&n).unwrap();
        let s = body.section(&frame).unwrap();
        let xi = frame.lift(&st);
        prop_assert!((s.gauge(&st) - body.gauge(&xi)).abs() <= 1e-9);
    }

    #[test]
    fn linear_image_pulls_back(i in 0usize..8, x in vec3(), m in prop::collection::vec(-2.0..2.0f64, 9)) {
        let body = &bodies()[i];
        let t = DMatrix::from_row_slice(3, 3, &m) + DMatrix::identity(3, 3) * 3.0;
        let inv = t.clone().try_inverse().unwrap();
        let image = body.apply_linear_matrix(t).unwrap();
        let pulled = mat_vec(&inv, &x);
        prop_assert!((image.gauge(&x) - body.gauge(&pulled)).abs() <= 1e-10 * body.gauge(&pulled).max(1.0));
    }
}
