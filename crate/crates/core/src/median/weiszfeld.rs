use super::{MedianResult, Status, WeightedPoints};
use crate::error::{Error, Result};
use crate::linalg;

const MAX_ITER: usize = 100_000;
const STEP_TOL: f64 = 1e-10;

fn euclidean_objective(wp: &WeightedPoints, x: &[f64]) -> f64 {
    wp.points()
        .iter()
        .zip(wp.weights())
        .map(|(p, w)| w * linalg::dist(x, p))
        .sum()
}

/// Pull of the other points at data point `k`, `Σ_{i≠k} wᵢ (pᵢ − p_k)/‖pᵢ − p_k‖`.
fn pull_at(wp: &WeightedPoints, k: usize) -> Vec<f64> {
    let pk = &wp.points()[k];
    let mut r = vec![0.0; pk.len()];
    for (i, (p, w)) in wp.points().iter().zip(wp.weights()).enumerate() {
        if i != k {
            let d = linalg::sub(p, pk);
            linalg::axpy(&mut r, w / linalg::norm(&d), &d);
        }
    }
    r
}

/// Euclidean geometric median by Weiszfeld's fixed-point iteration, with the
/// anchoring test at data points (`p_k` is optimal iff its pull is at most `w_k`)
/// and the Vardi–Zhang step when an iterate lands on a data point.
pub fn weiszfeld(wp: &WeightedPoints) -> Result<MedianResult> {
    if wp.len() < 2 {
        return Err(Error::InvalidInput("Weiszfeld needs at least two distinct points".into()));
    }
    for k in 0..wp.len() {
        if linalg::norm(&pull_at(wp, k)) <= wp.weights()[k] {
            let p = wp.points()[k].clone();
            let value = euclidean_objective(wp, &p);
            return Ok(MedianResult {
                minimizer: p,
                value,
                lower_bound: value,
                residual: 0.0,
                iterations: 0,
                status: Status::Converged,
            });
        }
    }
    let mut x = wp.centroid();
    let scale = wp.diameter().max(1e-300);
    for it in 1..=MAX_ITER {
        let mut num = vec![0.0; x.len()];
        let mut den = 0.0;
        let mut hit = None;
        for (i, (p, w)) in wp.points().iter().zip(wp.weights()).enumerate() {
            let d = linalg::dist(&x, p);
            if d <= 1e-15 * scale {
                hit = Some(i);
                continue;
            }
            linalg::axpy(&mut num, w / d, p);
            den += w / d;
        }
        let mut next = linalg::scale(&num, 1.0 / den);
        if let Some(k) = hit {
            // Vardi–Zhang: move off the data point along the pull.
            let r = pull_at(wp, k);
            let rn = linalg::norm(&r);
            let wk = wp.weights()[k];
            let t = (1.0 - wk / rn).max(0.0);
            next = linalg::add(&linalg::scale(&next, t), &linalg::scale(&x, 1.0 - t));
        }
        let step = linalg::dist(&next, &x);
        x = next;
        if step <= STEP_TOL * scale {
            let value = euclidean_objective(wp, &x);
            let mut grad = vec![0.0; x.len()];
            for (p, w) in wp.points().iter().zip(wp.weights()) {
                let d = linalg::sub(&x, p);
                let n = linalg::norm(&d);
                if n > 0.0 {
                    linalg::axpy(&mut grad, w / n, &d);
                }
            }
            // Iterates stay in conv(P), which also holds the minimizer.
            let residual = linalg::norm(&grad);
            return Ok(MedianResult {
                minimizer: x,
                value,
                lower_bound: value - residual * wp.diameter(),
                residual,
                iterations: it,
                status: Status::Converged,
            });
        }
    }
    Err(Error::IterationCap {
        cap: MAX_ITER,
        best: x,
        gap: f64::NAN,
    })
}
