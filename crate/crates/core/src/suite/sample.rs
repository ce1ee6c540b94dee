//! Seeded generators of random bodies and instances.

use crate::body::Body;
use crate::linalg;
use crate::median::WeightedPoints;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn gaussian(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn unit_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v = gaussian(rng, dim);
        let n = linalg::norm(&v);
        if n > 1e-9 {
            return linalg::scale(&v, 1.0 / n);
        }
    }
}

/// Uniform point of the Euclidean unit ball.
pub fn ball_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let u = unit_vector(rng, dim);
    linalg::scale(&u, rng.random::<f64>().powf(1.0 / dim as f64))
}

pub fn rotation(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |_, _| StandardNormal.sample(rng)).qr().q()
}

/// Ellipsoid with random orientation and semi-axes in `[0.3, 3]`.
pub fn ellipsoid(rng: &mut ChaCha8Rng, dim: usize) -> Body {
    let q = rotation(rng, dim);
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(dim, |_, _| {
        let a: f64 = rng.random_range(0.3..3.0);
        1.0 / (a * a)
    }));
    Body::ellipsoid_from_matrix(&q * d * q.transpose()).expect("random ellipsoid is positive definite")
}

pub fn invertible(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<f64> {
    loop {
        let t = DMatrix::from_fn(dim, dim, |_, _| StandardNormal.sample(rng));
        let s = t.clone().svd(false, false).singular_values;
        if s.min() > 0.2 && s.max() < 5.0 {
            return t;
        }
    }
}

pub fn h_polytope(rng: &mut ChaCha8Rng, dim: usize) -> Body {
    loop {
        let k = rng.random_range(dim..dim + 4);
        let rows: Vec<Vec<f64>> = (0..k)
            .map(|_| linalg::scale(&unit_vector(rng, dim), rng.random_range(0.5..2.0)))
            .collect();
        if let Ok(b) = Body::h_polytope(rows) {
            return b;
        }
    }
}

pub fn v_polytope(rng: &mut ChaCha8Rng, dim: usize) -> Body {
    loop {
        let k = rng.random_range(dim..dim + 4);
        let rows: Vec<Vec<f64>> = (0..k)
            .map(|_| linalg::scale(&unit_vector(rng, dim), rng.random_range(0.5..2.0)))
            .collect();
        if let Ok(b) = Body::v_polytope(rows) {
            return b;
        }
    }
}

/// `ℓp` ball with `p ∈ [1, 8]` (sometimes exactly 1), optionally axis-scaled.
pub fn lp_ball(rng: &mut ChaCha8Rng, dim: usize) -> Body {
    let p = if rng.random::<f64>() < 0.2 {
        1.0
    } else {
        rng.random_range(1.0..8.0)
    };
    if rng.random::<bool>() {
        Body::lp_ball(dim, p).unwrap()
    } else {
        let scales = (0..dim).map(|_| rng.random_range(0.5..2.0)).collect();
        Body::lp_ball_scaled(p, scales).unwrap()
    }
}

/// One of ellipsoid, ℓp ball, H-polytope, V-polytope.
pub fn body(rng: &mut ChaCha8Rng, dim: usize) -> Body {
    match rng.random_range(0..4) {
        0 => ellipsoid(rng, dim),
        1 => lp_ball(rng, dim),
        2 => h_polytope(rng, dim),
        _ => v_polytope(rng, dim),
    }
}

pub fn dirichlet(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

/// `m` points uniform in `[−1, 1]^dim` with Dirichlet(1) weights.
pub fn instance(rng: &mut ChaCha8Rng, dim: usize, m: usize) -> WeightedPoints {
    let points = (0..m)
        .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let w = dirichlet(rng, m);
    WeightedPoints::normalized(points, w).expect("random points are distinct")
}
