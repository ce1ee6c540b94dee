//! Brute-force and closed-form references used to cross-check the solvers.

use crate::body::Body;
use crate::error::{Error, Result};
use crate::median::{objective, WeightedPoints};

/// Smallest `t` among `values` whose cumulative weight reaches one half.
pub fn weighted_median(values: &[f64], weights: &[f64]) -> f64 {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|a, b| values[*a].total_cmp(&values[*b]));
    let total: f64 = weights.iter().sum();
    let mut acc = 0.0;
    for i in &order {
        acc += weights[*i];
        if acc >= 0.5 * total * (1.0 - 1e-15) {
            return values[*i];
        }
    }
    values[*order.last().expect("nonempty")]
}

/// Median under the ℓ₁ norm: the objective separates by coordinate, so the
/// coordinatewise weighted median is a minimizer. Returns it with its value.
pub fn coordinatewise_median(wp: &WeightedPoints) -> (Vec<f64>, f64) {
    let d = wp.dim();
    let x: Vec<f64> = (0..d)
        .map(|k| {
            let column: Vec<f64> = wp.points().iter().map(|p| p[k]).collect();
            weighted_median(&column, wp.weights())
        })
        .collect();
    let value = wp
        .points()
        .iter()
        .zip(wp.weights())
        .map(|(p, w)| w * p.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum::<f64>())
        .sum();
    (x, value)
}

/// Result of [`grid_scan_2d`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridScan {
    pub value: f64,
    pub argmin: Vec<f64>,
    pub step: f64,
}

/// `min F` over an `n × n` grid spanning the points' bounding box padded by
/// one diameter on every side.
pub fn grid_scan_2d(body: &Body, wp: &WeightedPoints, n: usize) -> Result<GridScan> {
    if body.dim() != 2 || wp.dim() != 2 {
        return Err(Error::InvalidInput("grid scan is planar".into()));
    }
    if n < 2 {
        return Err(Error::InvalidInput("grid needs at least two nodes per side".into()));
    }
    let diam = wp.diameter().max(1e-9);
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in wp.points() {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k] - diam);
            hi[k] = hi[k].max(p[k] + diam);
        }
    }
    let side = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let step = side / (n - 1) as f64;
    let mut best = GridScan {
        value: f64::INFINITY,
        argmin: vec![lo[0], lo[1]],
        step,
    };
    for i in 0..n {
        for j in 0..n {
            let x = [lo[0] + i as f64 * step, lo[1] + j as f64 * step];
            let v = objective(body, wp, &x);
            if v < best.value {
                best.value = v;
                best.argmin = x.to_vec();
            }
        }
    }
    Ok(best)
}
