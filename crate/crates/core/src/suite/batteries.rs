use super::sample;
use super::Check;
use crate::body::{Body, SectionFrame, SubgradientKind};
use crate::ellipsoid::{mm_scan, parallelogram_defect, SHADOW_SAMPLES};
use crate::intuition::{
    check_intuitive, construct_median_weights_with, search_witness, GeneratorChoice, SearchConfig, Verdict, Witness,
    WitnessRegion,
};
use crate::linalg::{self, dot};
use crate::median::{self, objective, weiszfeld, Region, WeightedPoints};
use crate::oracle;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Largest observed violation of one property, and where it happened.
struct Worst {
    value: f64,
    at: String,
    samples: usize,
}

impl Worst {
    fn new() -> Self {
        Worst {
            value: 0.0,
            at: String::new(),
            samples: 0,
        }
    }

    fn see(&mut self, v: f64, at: &str) {
        self.samples += 1;
        if v > self.value || v.is_nan() {
            self.value = if v.is_nan() { f64::INFINITY } else { v };
            self.at = at.to_string();
        }
    }

    fn check(&self, name: &str, tol: f64) -> Check {
        let mut detail = format!("max violation {:.3e} over {} samples (tol {tol:e})", self.value, self.samples);
        if self.value > 0.0 {
            detail.push_str(&format!(", worst on {}", self.at));
        }
        Check::new(name, self.value <= tol, detail)
    }
}

fn set_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let one_way = |a: &[Vec<f64>], b: &[Vec<f64>]| {
        a.iter()
            .map(|g| b.iter().map(|h| linalg::dist(g, h)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

fn signs(dim: usize) -> Vec<Vec<f64>> {
    (0..1usize << dim)
        .map(|mask| (0..dim).map(|k| if mask >> k & 1 == 1 { -1.0 } else { 1.0 }).collect())
        .collect()
}

/// Axes, edge midpoints and diagonals of the cube: every kink of ℓ₁ and ℓ∞.
fn lattice_kinks(dim: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for k in 0..dim {
        let mut e = vec![0.0; dim];
        e[k] = 1.0;
        out.push(e);
    }
    out.extend(signs(dim));
    if dim == 3 {
        out.extend(signs(3).into_iter().map(|mut s| {
            s[2] = 0.0;
            s
        }));
        out.extend(signs(3).into_iter().map(|mut s| {
            s[0] = 0.3;
            s
        }));
    }
    out
}

struct Subject {
    name: String,
    body: Body,
    kinks: Vec<Vec<f64>>,
}

fn subjects(rng: &mut ChaCha8Rng) -> Vec<Subject> {
    let l1 = Body::lp_ball(3, 1.0).unwrap();
    let h = sample::h_polytope(rng, 3);
    let v = sample::v_polytope(rng, 3);
    let t = sample::invertible(rng, 3);
    let l4 = Body::lp_ball(3, 4.0).unwrap();
    let normal = sample::unit_vector(rng, 3);
    let frame = SectionFrame::from_normal(&normal).unwrap();
    let section_kinks = (0..3)
        .map(|k| {
            let mut e = vec![0.0; 3];
            e[k] = 1.0;
            frame.coords(&linalg::cross(&normal, &e))
        })
        .collect();
    let mut out = vec![
        Subject {
            name: "euclidean ball".into(),
            body: Body::euclidean_ball(3).unwrap(),
            kinks: vec![],
        },
        Subject {
            name: "ellipsoid diag(1, 1/4, 1/9)".into(),
            body: Body::ellipsoid_axes(&[1.0, 2.0, 3.0]).unwrap(),
            kinks: vec![],
        },
        Subject {
            name: "l1 ball".into(),
            body: l1.clone(),
            kinks: lattice_kinks(3),
        },
        Subject {
            name: "l4 ball".into(),
            body: l4.clone(),
            kinks: lattice_kinks(3),
        },
        Subject {
            name: "cube".into(),
            body: Body::cube(3).unwrap(),
            kinks: lattice_kinks(3),
        },
        Subject {
            name: "scaled l1.5 disc".into(),
            body: Body::lp_ball_scaled(1.5, vec![2.0, 0.5]).unwrap(),
            kinks: lattice_kinks(2),
        },
        Subject {
            name: "random h-polytope".into(),
            kinks: h.polytope_vertices().unwrap().to_vec(),
            body: h,
        },
        Subject {
            name: "random v-polytope".into(),
            kinks: v.polytope_vertices().unwrap().to_vec(),
            body: v,
        },
        Subject {
            name: "linear image of l4".into(),
            kinks: lattice_kinks(3).iter().map(|k| linalg::mat_vec(&t, k)).collect(),
            body: l4.apply_linear_matrix(t).unwrap(),
        },
        Subject {
            name: "oblique section of l1".into(),
            body: l1.section(&frame).unwrap(),
            kinks: section_kinks,
        },
    ];
    out.truncate(10);
    out
}

/// Uniform sample of the body by rejection from its bounding box.
fn body_point(rng: &mut ChaCha8Rng, body: &Body, reach: &[f64]) -> Vec<f64> {
    loop {
        let x: Vec<f64> = reach.iter().map(|r| rng.random_range(-r..*r)).collect();
        if body.gauge(&x) <= 1.0 {
            return x;
        }
    }
}

pub(super) fn subgradients(seed: u64) -> Vec<Check> {
    let mut rng = sample::rng(seed, 1);
    let mut positivity = Worst::new();
    let mut homogeneity = Worst::new();
    let mut symmetry = Worst::new();
    let mut triangle = Worst::new();
    let mut inequality = Worst::new();
    let mut sym_g = Worst::new();
    let mut sym_g1 = Worst::new();
    let mut scaling = Worst::new();
    let mut support = Worst::new();
    let mut duality = Worst::new();
    let mut attained = Worst::new();
    let mut errors = Vec::new();

    for s in subjects(&mut rng) {
        let body = &s.body;
        let d = body.dim();
        let ys: Vec<(Vec<f64>, f64)> = (0..200)
            .map(|_| {
                let y = sample::gaussian(&mut rng, d);
                let g = body.gauge(&y);
                (y, g)
            })
            .collect();
        let reach: Vec<f64> = (0..d)
            .map(|k| {
                let mut e = vec![0.0; d];
                e[k] = 1.0;
                body.dual_gauge(&e)
            })
            .collect();
        let inside: Vec<Vec<f64>> = (0..500).map(|_| body_point(&mut rng, body, &reach)).collect();

        for j in 0..500 {
            let p = if j % 4 == 0 && !s.kinks.is_empty() {
                let k = &s.kinks[(j / 4) % s.kinks.len()];
                linalg::scale(k, rng.random_range(0.5..2.0))
            } else {
                sample::gaussian(&mut rng, d)
            };
            let x = sample::gaussian(&mut rng, d);
            let gp = body.gauge(&p);
            let gx = body.gauge(&x);

            positivity.see(if gx > 0.0 && gp > 0.0 { 0.0 } else { 1.0 }, &s.name);
            let c = rng.random_range(0.1..10.0);
            homogeneity.see((body.gauge(&linalg::scale(&x, c)) - c * gx).abs(), &s.name);
            symmetry.see((body.gauge(&linalg::scale(&x, -1.0)) - gx).abs(), &s.name);
            triangle.see(body.gauge(&linalg::add(&x, &p)) - gx - gp, &s.name);

            let set = match body.subdifferential(&p) {
                Ok(set) => set,
                Err(e) => {
                    errors.push(format!("{}: {e}", s.name));
                    continue;
                }
            };
            let gens = set.generators();
            for g in gens {
                for (y, gy) in &ys {
                    inequality.see(gp + dot(g, &linalg::sub(y, &p)) - gy, &s.name);
                    sym_g.see(gp - dot(g, y) - body.gauge(&linalg::sub(y, &p)), &s.name);
                }
                let unit = linalg::scale(&p, 1.0 / gp);
                for z in &inside {
                    support.see(dot(g, &linalg::sub(z, &unit)), &s.name);
                }
                attained.see((dot(g, &p) - gp).abs() / gp.max(1.0), &s.name);
            }
            match body.subdifferential(&linalg::scale(&p, -1.0)) {
                Ok(neg) => {
                    let flipped: Vec<Vec<f64>> = neg.generators().iter().map(|g| linalg::scale(g, -1.0)).collect();
                    sym_g1.see(set_distance(gens, &flipped), &s.name);
                }
                Err(e) => errors.push(format!("{}: {e}", s.name)),
            }
            for c in [0.5, 2.0, 10.0] {
                match body.subdifferential(&linalg::scale(&p, c)) {
                    Ok(other) => scaling.see(set_distance(gens, other.generators()), &s.name),
                    Err(e) => errors.push(format!("{}: {e}", s.name)),
                }
            }
            let h = sample::gaussian(&mut rng, d);
            duality.see(dot(&h, &x) - body.dual_gauge(&h) * gx, &s.name);
        }
    }
    vec![
        Check::new(
            "subdifferentials defined off the origin",
            errors.is_empty(),
            errors.first().cloned().unwrap_or_else(|| "no errors".into()),
        ),
        positivity.check("gauge positivity", 0.0),
        homogeneity.check("gauge homogeneity", 1e-10),
        symmetry.check("gauge symmetry", 0.0),
        triangle.check("triangle inequality", 1e-10),
        inequality.check("subgradient inequality", 1e-9),
        sym_g.check("reflected subgradient at the point", 1e-9),
        sym_g1.check("subdifferential at -p", 1e-9),
        scaling.check("subdifferential along the ray", 1e-9),
        support.check("supporting halfspace", 1e-9),
        duality.check("dual norm inequality", 1e-10),
        attained.check("dual pairing attained", 1e-10),
    ]
}

fn gap_battery(
    name: &str,
    instances: impl Iterator<Item = (Body, WeightedPoints)>,
    tol: f64,
) -> Check {
    let mut worst = f64::NEG_INFINITY;
    let mut count = 0;
    let mut bad = Vec::new();
    for (i, (body, wp)) in instances.enumerate() {
        count += 1;
        match check_intuitive(&body, &wp, tol) {
            Ok(out) => {
                worst = worst.max(out.gap);
                if out.verdict == Verdict::Violated || out.gap > tol {
                    bad.push(format!("instance {i} ({}) gap {:e}", body.kind(), out.gap));
                }
            }
            Err(e) => bad.push(format!("instance {i} ({}): {e}", body.kind())),
        }
    }
    let mut detail = format!("{count} instances, largest gap {worst:.3e} (tol {tol:e})");
    if let Some(b) = bad.first() {
        detail.push_str(&format!("; {} failures, first: {b}", bad.len()));
    }
    Check::new(name, bad.is_empty(), detail)
}

pub(super) fn planar(seed: u64) -> Vec<Check> {
    let mut rng = sample::rng(seed, 2);
    let bodies = (0..500).map(|_| {
        let body = match rng.random_range(0..3) {
            0 => sample::ellipsoid(&mut rng, 2),
            1 => sample::lp_ball(&mut rng, 2),
            _ => sample::h_polytope(&mut rng, 2),
        };
        let m = rng.random_range(2..=8);
        (body, sample::instance(&mut rng, 2, m))
    });
    let random = gap_battery("random planar bodies", bodies.collect::<Vec<_>>().into_iter(), 1e-6);

    let mut rng = sample::rng(seed, 3);
    let sections = (0..200).map(|_| {
        let base = match rng.random_range(0..3) {
            0 => Body::lp_ball(3, 4.0).unwrap(),
            1 => Body::cube(3).unwrap(),
            _ => sample::v_polytope(&mut rng, 3),
        };
        let frame = SectionFrame::from_normal(&sample::unit_vector(&mut rng, 3)).unwrap();
        let m = rng.random_range(2..=8);
        (base.section(&frame).unwrap(), sample::instance(&mut rng, 2, m))
    });
    let sliced = gap_battery("central sections of 3D bodies", sections.collect::<Vec<_>>().into_iter(), 1e-6);
    vec![random, sliced]
}

pub(super) fn ellipsoids(seed: u64) -> Vec<Check> {
    let mut rng = sample::rng(seed, 4);
    let cases: Vec<(Body, WeightedPoints)> = (0..200)
        .map(|_| {
            let body = sample::ellipsoid(&mut rng, 3);
            let m = rng.random_range(2..=8);
            (body, sample::instance(&mut rng, 3, m))
        })
        .collect();
    let random = gap_battery("random 3D ellipsoids", cases.into_iter(), 1e-6);

    // F_{TK,W}(ξ) = F_{K,W∘T}(T⁻¹ξ), so both problems share their values.
    let ball = Body::euclidean_ball(3).unwrap();
    let mut worst_gap = 0.0f64;
    let mut worst_shift = 0.0f64;
    let mut failures = Vec::new();
    for i in 0..100 {
        let t = sample::invertible(&mut rng, 3);
        let t_inv = t.clone().try_inverse().expect("sampled map is invertible");
        let image = ball.apply_linear_matrix(t).unwrap();
        let m = rng.random_range(2..=8);
        let wp = sample::instance(&mut rng, 3, m);
        let pulled = wp.map_points(|p| linalg::mat_vec(&t_inv, p)).unwrap();
        let solve = |body: &Body, wp: &WeightedPoints| -> Option<(f64, f64)> {
            let free = median::solve_unconstrained(body, wp).ok()?;
            let held = median::solve_constrained(body, wp, &Region::Hull).ok()?;
            (free.is_converged() && held.is_converged()).then_some((free.value, held.value))
        };
        match (solve(&image, &wp), solve(&ball, &pulled)) {
            (Some((f1, h1)), Some((f2, h2))) => {
                worst_gap = worst_gap.max(h1 - f1);
                worst_shift = worst_shift.max((f1 - f2).abs()).max((h1 - h2).abs());
            }
            _ => failures.push(i),
        }
    }
    let invariant = Check::new(
        "linear images of the ball",
        failures.is_empty() && worst_gap <= 1e-6 && worst_shift <= 1e-6,
        format!(
            "100 bodies, largest gap {worst_gap:.3e}, largest value mismatch {worst_shift:.3e} (tol 1e-6), {} unconverged",
            failures.len()
        ),
    );
    vec![random, invariant]
}

pub(super) fn witness_null(seed: u64) -> Vec<Check> {
    let mut rng = sample::rng(seed, 5);
    let body = sample::ellipsoid(&mut rng, 3);
    let cfg = SearchConfig {
        trials: 300,
        seed,
        ..SearchConfig::default()
    };
    match search_witness(&body, &cfg) {
        Ok(out) => vec![Check::new(
            "witness search on an ellipsoid finds nothing",
            out.witness.is_none() && out.refined_gap <= 1e-6,
            format!(
                "{} trials, {} scored, best gap {:.3e}, refined {:.3e}",
                out.trials, out.scored, out.best_gap, out.refined_gap
            ),
        )],
        Err(e) => vec![Check::new("witness search on an ellipsoid finds nothing", false, e.to_string())],
    }
}

fn witness_check(name: &str, body: &Body, region: WitnessRegion, seed: u64, trials: usize) -> Check {
    let cfg = SearchConfig {
        trials,
        seed,
        region,
        ..SearchConfig::default()
    };
    let out = match search_witness(body, &cfg) {
        Ok(out) => out,
        Err(e) => return Check::new(name, false, e.to_string()),
    };
    let Some(w) = out.witness else {
        return Check::new(
            name,
            false,
            format!(
                "no witness found at budget: {trials} trials, best gap {:.3e}, refined {:.3e}",
                out.best_gap, out.refined_gap
            ),
        );
    };
    let replay = Witness::from_json(&w.to_json()).and_then(|r| r.recertify());
    let prov = w.provenance.as_ref().map_or(0, |p| p.trial);
    match replay {
        Ok(gap) => Check::new(
            name,
            w.gap > 0.0 && w.separator.margin > 0.0 && gap > 0.0,
            format!(
                "trial {prov} of {trials}: certified gap {:.4e}, separator margin {:.3e}, replayed gap {gap:.4e}",
                w.gap, w.separator.margin
            ),
        ),
        Err(e) => Check::new(name, false, format!("replay failed: {e}")),
    }
}

pub(super) fn witnesses(seed: u64) -> Vec<Check> {
    vec![
        witness_check("l1 ball", &Body::lp_ball(3, 1.0).unwrap(), WitnessRegion::Hull, seed, 500),
        witness_check("cube", &Body::cube(3).unwrap(), WitnessRegion::Hull, seed, 500),
        witness_check("l4 ball", &Body::lp_ball(3, 4.0).unwrap(), WitnessRegion::Hull, seed, 500),
    ]
}

pub(super) fn affine(seed: u64) -> Vec<Check> {
    let l4 = Body::lp_ball(3, 4.0).unwrap();
    let check = witness_check("l4 ball, three coplanar points", &l4, WitnessRegion::AffineSpan, seed, 500);
    vec![check]
}

pub(super) fn weights(seed: u64) -> Vec<Check> {
    let mut rng = sample::rng(seed, 6);
    let mut built = 0;
    let mut rejected = 0;
    let mut min_wz = f64::INFINITY;
    let mut balance = Worst::new();
    let mut solver = Worst::new();
    let mut grid = Worst::new();
    let mut failures = Vec::new();
    let pick = GeneratorChoice::default();
    while built < 100 {
        let body = sample::body(&mut rng, 2);
        let [x, y, z] = [0, 1, 2].map(|_| body.boundary_point(&sample::unit_vector(&mut rng, 2)).unwrap());
        let (wp, grads) = match construct_median_weights_with(&body, [&x, &y, &z], [&pick, &pick, &pick]) {
            Ok(r) => r,
            Err(_) => {
                rejected += 1;
                continue;
            }
        };
        let label = format!("case {built} ({})", body.kind());
        min_wz = min_wz.min(wp.weights()[0]);
        let mut sum = vec![0.0; 2];
        for (g, w) in grads.iter().zip(wp.weights()) {
            linalg::axpy(&mut sum, *w, g);
        }
        balance.see(linalg::norm(&sum), &label);
        let at_zero = objective(&body, &wp, &[0.0, 0.0]);
        match median::solve_unconstrained(&body, &wp) {
            Ok(r) if r.is_converged() => solver.see(at_zero - r.value, &label),
            Ok(r) => failures.push(format!("{label}: status {:?}", r.status)),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
        if built % 10 == 0 {
            match oracle::grid_scan_2d(&body, &wp, 2001) {
                Ok(scan) => grid.see(at_zero - scan.value, &label),
                Err(e) => failures.push(format!("{label}: {e}")),
            }
        }
        built += 1;
    }
    vec![
        Check::new(
            "positive weight on z",
            min_wz > 0.0,
            format!("{built} constructions ({rejected} dependent draws redrawn), smallest W(z) {min_wz:.4}"),
        ),
        balance.check("weighted subgradients cancel", 1e-10),
        solver.check("origin optimal against the solver", 1e-7),
        grid.check("origin optimal against a 2001x2001 grid", 1e-7),
        Check::new(
            "solves converged",
            failures.is_empty(),
            failures.first().cloned().unwrap_or_else(|| "all converged".into()),
        ),
    ]
}

pub(super) fn square(seed: u64) -> Vec<Check> {
    let mut rng = sample::rng(seed, 7);
    let l1 = Body::lp_ball(2, 1.0).unwrap();
    let wp = WeightedPoints::uniform(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let mut flat = Worst::new();
    let corners = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
    for c in corners {
        flat.see((objective(&l1, &wp, &c) - 1.0).abs(), "corner");
    }
    for _ in 0..20 {
        let x = [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)];
        flat.see((objective(&l1, &wp, &x) - 1.0).abs(), "interior point");
    }
    let solved = match median::solve_unconstrained(&l1, &wp) {
        Ok(r) => Check::new(
            "solver value",
            (r.value - 1.0).abs() <= 1e-8,
            format!("value {:.15} at {:?}", r.value, r.minimizer),
        ),
        Err(e) => Check::new("solver value", false, e.to_string()),
    };
    vec![flat.check("objective is 1 on the unit square", 1e-12), solved]
}

/// Largest `|⟨u, G_z⟩|` over unit gradients along the section orthogonal to `dir`.
fn null_residual(body: &Body, dir: &[f64], u: &[f64], m: usize) -> f64 {
    let frame = SectionFrame::from_normal(dir).unwrap();
    (0..m)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / m as f64;
            let z = body.boundary_point(&frame.lift(&[t.cos(), t.sin()])).unwrap();
            match body.subdifferential(&z).unwrap().kind {
                SubgradientKind::Smooth(g) => dot(u, &g).abs() / linalg::norm(&g),
                SubgradientKind::Facial(_) => f64::INFINITY,
            }
        })
        .fold(0.0, f64::max)
}

pub(super) fn shadow(seed: u64) -> Vec<Check> {
    let mut rng = sample::rng(seed, 8);
    let mut ellipsoids = vec![
        ("ball".to_string(), Body::euclidean_ball(3).unwrap()),
        ("ellipsoid axes (1, 2, 3)".to_string(), Body::ellipsoid_axes(&[1.0, 2.0, 3.0]).unwrap()),
    ];
    for i in 0..3 {
        ellipsoids.push((format!("random ellipsoid {i}"), sample::ellipsoid(&mut rng, 3)));
    }
    let t = sample::invertible(&mut rng, 3);
    let image = ("linear image of the ball".to_string(), Body::euclidean_ball(3).unwrap().apply_linear_matrix(t).unwrap());

    let mut flat = Worst::new();
    for (name, body) in &ellipsoids {
        flat.see(parallelogram_defect(body, 2000, seed), name);
    }
    let mut skew = Vec::new();
    let mut skew_ok = true;
    for p in [1.0, 4.0, 6.0] {
        let d = parallelogram_defect(&Body::lp_ball(3, p).unwrap(), 2000, seed);
        skew_ok &= d >= 0.5;
        skew.push(format!("l{p}: {d:.3}"));
    }

    let mut scan = Worst::new();
    let mut null = Worst::new();
    let mut errors = Vec::new();
    for (name, body) in ellipsoids.iter().chain(std::iter::once(&image)) {
        match mm_scan(body, 64, SHADOW_SAMPLES, seed) {
            Ok(s) => {
                scan.see(s.max_sigma3, name);
                for r in s.reports.iter().step_by(16) {
                    if r.sigma3 <= 1e-7 {
                        null.see(null_residual(body, &r.direction, &r.best_u, SHADOW_SAMPLES), name);
                    }
                }
            }
            Err(e) => errors.push(format!("{name}: {e}")),
        }
    }
    let l4 = match mm_scan(&Body::lp_ball(3, 4.0).unwrap(), 64, SHADOW_SAMPLES, seed) {
        Ok(s) => Check::new(
            "l4 ball scan",
            s.max_sigma3 > 0.01,
            format!("max sigma3 {:.4} over 64 directions (threshold 0.01)", s.max_sigma3),
        ),
        Err(e) => Check::new("l4 ball scan", false, e.to_string()),
    };
    vec![
        flat.check("parallelogram defect of ellipsoids", 1e-9),
        Check::new("parallelogram defect of lp balls", skew_ok, skew.join(", ") + " (threshold 0.5)"),
        Check::new(
            "ellipsoid scans ran",
            errors.is_empty(),
            errors.first().cloned().unwrap_or_else(|| "6 bodies".into()),
        ),
        scan.check("ellipsoid scans are flat", 1e-8),
        null.check("null direction orthogonal to gradients", 1e-5),
        l4,
    ]
}

pub(super) fn solvers(seed: u64) -> Vec<Check> {
    let mut rng = sample::rng(seed, 9);
    let mut failures = Vec::new();

    let mut euclid = Worst::new();
    for i in 0..200 {
        let d = 2 + i % 2;
        let body = Body::euclidean_ball(d).unwrap();
        let m = rng.random_range(2..=8);
        let wp = sample::instance(&mut rng, d, m);
        match (weiszfeld(&wp), median::solve_unconstrained(&body, &wp)) {
            (Ok(a), Ok(b)) if b.is_converged() => euclid.see((a.value - b.value).abs(), &format!("instance {i}")),
            _ => failures.push(format!("euclidean instance {i}")),
        }
    }

    let mut taxicab = Worst::new();
    for i in 0..200 {
        let d = 2 + i % 2;
        let body = Body::lp_ball(d, 1.0).unwrap();
        let m = rng.random_range(2..=8);
        let wp = sample::instance(&mut rng, d, m);
        let (_, exact) = oracle::coordinatewise_median(&wp);
        match median::solve_unconstrained(&body, &wp) {
            Ok(r) if r.is_converged() => taxicab.see((r.value - exact).abs(), &format!("instance {i}")),
            _ => failures.push(format!("l1 instance {i}")),
        }
    }

    let mut above = Worst::new();
    let mut below = Worst::new();
    for i in 0..50 {
        let body = sample::body(&mut rng, 2);
        let m = rng.random_range(2..=3);
        let wp = sample::instance(&mut rng, 2, m);
        let lip = body.norm_equivalence_constants().upper;
        let (Ok(r), Ok(scan)) = (median::solve_unconstrained(&body, &wp), oracle::grid_scan_2d(&body, &wp, 2001))
        else {
            failures.push(format!("grid instance {i}"));
            continue;
        };
        let label = format!("instance {i} ({})", body.kind());
        // The solver may not beat the true minimum, and the grid is within L·h of it.
        above.see(r.value - scan.value, &label);
        below.see(scan.value - r.value - lip * scan.step, &label);
    }
    vec![
        euclid.check("Weiszfeld agrees with the general solver", 1e-5),
        taxicab.check("l1 solver matches the coordinatewise median", 1e-7),
        above.check("solver value below the grid minimum", 1e-9),
        below.check("grid minimum within L*h of the solver value", 0.0),
        Check::new(
            "every solve converged",
            failures.is_empty(),
            failures.first().cloned().unwrap_or_else(|| "450 instances".into()),
        ),
    ]
}
