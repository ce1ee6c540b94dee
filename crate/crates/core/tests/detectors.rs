use intuitive_norms::ellipsoid::{mm_scan, parallelogram_defect, shadow_rank, SHADOW_SAMPLES};
use intuitive_norms::intuition::{search_witness, SearchConfig};
use intuitive_norms::suite::sample;
use intuitive_norms::Body;

fn dilate(body: &Body, c: f64) -> Body {
    let d = body.dim();
    let map = (0..d)
        .map(|i| (0..d).map(|j| if i == j { c } else { 0.0 }).collect())
        .collect();
    body.apply_linear(map).unwrap()
}

#[test]
fn detectors_agree_on_the_test_family() {
    let mut rng = sample::rng(11, 0);
    let mut family: Vec<(String, Body, bool)> = vec![("sphere".into(), Body::euclidean_ball(3).unwrap(), true)];
    for i in 0..3 {
        family.push((format!("ellipsoid {i}"), sample::ellipsoid(&mut rng, 3), true));
    }
    for p in [1.0, 4.0, 6.0] {
        family.push((format!("l{p}"), Body::lp_ball(3, p).unwrap(), false));
    }
    family.push(("h-polytope".into(), sample::h_polytope(&mut rng, 3), false));

    for (name, body, is_ellipsoid) in &family {
        let defect = parallelogram_defect(body, 2000, 1);
        assert_eq!(defect <= 0.1, *is_ellipsoid, "{name}: defect {defect}");
        if body.is_smooth() {
            let scan = mm_scan(body, 64, SHADOW_SAMPLES, 1).unwrap();
            assert_eq!(scan.max_sigma3 <= 0.01, *is_ellipsoid, "{name}: sigma3 {}", scan.max_sigma3);
        }
        if !is_ellipsoid {
            let cfg = SearchConfig {
                trials: 400,
                seed: 3,
                ..SearchConfig::default()
            };
            let out = search_witness(body, &cfg).unwrap();
            let w = out.witness.unwrap_or_else(|| panic!("{name}: no witness, best gap {}", out.best_gap));
            assert!(w.gap > 0.0 && w.recertify().is_ok());
        }
    }
}

#[test]
fn detectors_are_scale_invariant() {
    let dir = [0.3, -0.4, 0.866];
    for body in [Body::lp_ball(3, 4.0).unwrap(), Body::ellipsoid_axes(&[1.0, 2.0, 0.5]).unwrap()] {
        for c in [0.25, 3.0] {
            let big = dilate(&body, c);
            let (a, b) = (parallelogram_defect(&body, 500, 9), parallelogram_defect(&big, 500, 9));
            assert!((a - b).abs() <= 1e-9, "defect {a} vs {b}");
            let (a, b) = (shadow_rank(&body, &dir, 128).unwrap(), shadow_rank(&big, &dir, 128).unwrap());
            assert!((a.sigma3 - b.sigma3).abs() <= 1e-9, "sigma3 {} vs {}", a.sigma3, b.sigma3);
        }
    }
}

#[test]
fn l4_diagonal_section_is_not_flat() {
    let l4 = Body::lp_ball(3, 4.0).unwrap();
    let s = 1.0 / 3f64.sqrt();
    let r = shadow_rank(&l4, &[s, s, s], 256).unwrap();
    assert!(r.sigma3 > 0.01);
    assert_eq!(r.samples, 256);
}

#[test]
fn ellipsoid_sections_are_flat() {
    let e = Body::ellipsoid_axes(&[0.4, 1.0, 2.5]).unwrap();
    let mut rng = sample::rng(4, 0);
    for _ in 0..10 {
        let r = shadow_rank(&e, &sample::unit_vector(&mut rng, 3), 128).unwrap();
        assert!(r.sigma3 <= 1e-9);
    }
    let t = sample::invertible(&mut rng, 3);
    let image = Body::euclidean_ball(3).unwrap().apply_linear_matrix(t).unwrap();
    assert!(mm_scan(&image, 64, SHADOW_SAMPLES, 2).unwrap().max_sigma3 <= 1e-8);
}

#[test]
fn search_does_not_depend_on_the_thread_count() {
    let l1 = Body::lp_ball(3, 1.0).unwrap();
    let cfg = SearchConfig {
        trials: 80,
        seed: 21,
        ..SearchConfig::default()
    };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| search_witness(&l1, &cfg).unwrap())
    };
    assert_eq!(run(1), run(3));
}
