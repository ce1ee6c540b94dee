//! Numerical ellipsoid detectors.
//!
//! [`parallelogram_defect`] measures how far the gauge is from satisfying
//! `‖x+y‖² + ‖x−y‖² = 2‖x‖² + 2‖y‖²`. [`shadow_rank`] tests whether the
//! boundary of one central planar section lies in a single shadow boundary:
//! for a smooth body that happens exactly when the gradients along the
//! section boundary are coplanar, so the third singular value of the stacked
//! unit gradients vanishes. [`mm_scan`] repeats the test over many sections.

use crate::body::{Body, SectionFrame, SubgradientKind};
use crate::error::{Error, Result};
use crate::linalg;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default number of section boundary samples per direction.
pub const SHADOW_SAMPLES: usize = 256;

fn normal_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| StandardNormal.sample(rng)).collect()
}

/// Uniform sample of the Euclidean unit ball pushed radially into the body:
/// `x ↦ ‖x‖₂·x/‖x‖_K`, so the gauge of the result is `‖x‖₂ ≤ 1`. The
/// defect is then unchanged when the body is dilated.
fn body_sample(body: &Body, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let dim = body.dim();
    loop {
        let v = normal_vector(rng, dim);
        let n = linalg::norm(&v);
        if n < 1e-12 {
            continue;
        }
        let r = rng.random::<f64>().powf(1.0 / dim as f64);
        let x = linalg::scale(&v, r / n);
        let g = body.gauge(&x);
        if g > 0.0 {
            return linalg::scale(&x, r / g);
        }
    }
}

/// Largest violation of the parallelogram law over `n_samples` seeded pairs.
pub fn parallelogram_defect(body: &Body, n_samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..n_samples {
        let x = body_sample(body, &mut rng);
        let y = body_sample(body, &mut rng);
        worst = worst.max(pair_defect(body, &x, &y));
    }
    worst
}

/// `|‖x+y‖² + ‖x−y‖² − 2‖x‖² − 2‖y‖²|`.
pub fn pair_defect(body: &Body, x: &[f64], y: &[f64]) -> f64 {
    let sq = |v: &[f64]| body.gauge(v).powi(2);
    (sq(&linalg::add(x, y)) + sq(&linalg::sub(x, y)) - 2.0 * sq(x) - 2.0 * sq(y)).abs()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowReport {
    pub direction: Vec<f64>,
    pub sigma3: f64,
    /// Unit vector most nearly orthogonal to every sampled gradient.
    pub best_u: Vec<f64>,
    pub samples: usize,
    /// Boundary samples dropped because the gauge has a kink there.
    pub skipped: usize,
}

/// Shadow-rank test for the section of `body` orthogonal to `direction`.
pub fn shadow_rank(body: &Body, direction: &[f64], m: usize) -> Result<ShadowReport> {
    if body.dim() != 3 {
        return Err(Error::InvalidInput(format!(
            "shadow rank needs a body in dimension 3, got {}",
            body.dim()
        )));
    }
    if !body.is_smooth() {
        return Err(Error::NotSmooth(format!(
            "{} bodies have kinks; use a smooth body (ellipsoid, lp ball with p > 1)",
            body.kind()
        )));
    }
    if m < 3 {
        return Err(Error::InvalidInput("at least three samples are needed".into()));
    }
    let frame = SectionFrame::from_normal(direction)?;
    let mut rows: Vec<f64> = Vec::with_capacity(3 * m);
    let mut skipped = 0;
    for k in 0..m {
        let t = std::f64::consts::TAU * k as f64 / m as f64;
        let z = body.boundary_point(&frame.lift(&[t.cos(), t.sin()]))?;
        match body.subdifferential(&z)?.kind {
            SubgradientKind::Smooth(g) => {
                let n = linalg::norm(&g);
                rows.extend(g.iter().map(|c| c / n));
            }
            SubgradientKind::Facial(_) => skipped += 1,
        }
    }
    if skipped * 10 > m {
        return Err(Error::NotSmooth(format!(
            "{skipped} of {m} section samples hit kinks; use a smooth body"
        )));
    }
    let used = rows.len() / 3;
    let g = DMatrix::from_row_slice(used, 3, &rows);
    let svd = g.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let (k, sigma3) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |m, (i, s)| if *s < m.1 { (i, *s) } else { m });
    let best_u: Vec<f64> = v_t.row(k).iter().copied().collect();
    Ok(ShadowReport {
        direction: frame.normal.clone(),
        sigma3: sigma3.max(0.0),
        best_u,
        samples: used,
        skipped,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub max_sigma3: f64,
    pub argmax: Vec<f64>,
    /// Every scanned direction with its report, in scan order.
    pub reports: Vec<ShadowReport>,
}

/// `n` quasi-uniform unit vectors on the upper half of the sphere (antipodal
/// directions give the same section), randomly rotated by `seed`.
pub fn scan_directions(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Random rotation from the QR factor of a Gaussian matrix.
    let gauss = DMatrix::from_fn(3, 3, |_, _| StandardNormal.sample(&mut rng));
    let q = gauss.qr().q();
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|i| {
            // Fibonacci lattice on the full sphere, then folded to one hemisphere.
            let z = 1.0 - (2.0 * i as f64 + 1.0) / (2.0 * n as f64);
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            let v = [r * phi.cos(), r * phi.sin(), z];
            let mut w = linalg::mat_vec(&q, &v);
            if w[2] < 0.0 || (w[2] == 0.0 && w[0] < 0.0) {
                w = linalg::scale(&w, -1.0);
            }
            w
        })
        .collect()
}

/// Shadow-rank test over `n_directions` sections.
pub fn mm_scan(body: &Body, n_directions: usize, m: usize, seed: u64) -> Result<ScanSummary> {
    let dirs = scan_directions(n_directions, seed);
    let reports: Vec<ShadowReport> = dirs
        .par_iter()
        .map(|d| shadow_rank(body, d, m))
        .collect::<Result<_>>()?;
    let (max_sigma3, argmax) = reports
        .iter()
        .fold((f64::NEG_INFINITY, vec![]), |acc, r| {
            if r.sigma3 > acc.0 {
                (r.sigma3, r.direction.clone())
            } else {
                acc
            }
        });
    Ok(ScanSummary {
        max_sigma3,
        argmax,
        reports,
    })
}

/// Random unit vector, for callers that want one direction at a time.
pub fn random_direction(seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v = normal_vector(&mut rng, 3);
        let n = linalg::norm(&v);
        if n > 1e-12 {
            return linalg::scale(&v, 1.0 / n);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipsoid_has_no_defect() {
        let body = Body::ellipsoid_axes(&[1.0, 0.3, 2.5]).unwrap();
        assert!(parallelogram_defect(&body, 2000, 1) <= 1e-9);
    }

    #[test]
    fn l1_pair_defect_is_four() {
        let l1 = Body::lp_ball(2, 1.0).unwrap();
        assert!((pair_defect(&l1, &[1.0, 0.0], &[0.0, 1.0]) - 4.0).abs() < 1e-12);
        assert!(parallelogram_defect(&l1, 2000, 1) > 0.5);
    }

    #[test]
    fn l4_pair_defect() {
        let l4 = Body::lp_ball(3, 4.0).unwrap();
        let d = pair_defect(&l4, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]);
        assert!((d - (4.0 - 2.0 * 2.0f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn sphere_sections_are_flat() {
        let ball = Body::euclidean_ball(3).unwrap();
        let r = shadow_rank(&ball, &random_direction(3), 64).unwrap();
        assert!(r.sigma3 <= 1e-12);
        assert!((linalg::norm(&r.best_u) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn polytopes_are_refused() {
        let cube = Body::cube(3).unwrap();
        assert!(matches!(shadow_rank(&cube, &[0.0, 0.0, 1.0], 64), Err(Error::NotSmooth(_))));
    }

    #[test]
    fn scan_directions_are_unit_and_distinct() {
        let dirs = scan_directions(64, 5);
        assert_eq!(dirs.len(), 64);
        for d in &dirs {
            assert!((linalg::norm(d) - 1.0).abs() < 1e-12);
        }
        assert_eq!(dirs, scan_directions(64, 5));
    }
}
