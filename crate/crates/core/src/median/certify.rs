//! Certified lower bounds on `min F` over a bounded region.
//!
//! `F` is `L`-Lipschitz in the Euclidean metric with `L` the upper
//! norm-equivalence constant of the body, so the value at a grid node bounds
//! `F` on the surrounding cell from below.

use super::{objective, WeightedPoints};
use crate::body::Body;
use crate::error::{Error, Result};
use crate::geometry::{self, AffineSpan};
use crate::linalg;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const GRID_CAP: u128 = 10_000_000;

/// Bounded region over which a lower bound is certified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundRegion {
    /// `conv(P)` of the instance.
    Hull,
    /// Disc of `radius` around `base` inside the affine plane spanned by `basis`.
    Patch {
        base: Vec<f64>,
        basis: Vec<Vec<f64>>,
        radius: f64,
    },
}

/// Disc in the affine plane `base + span(basis)` that contains every
/// minimizer of `F` restricted to that plane.
///
/// Any `ξ` satisfies `F(ξ) ≥ lower·(‖ξ − base‖₂ − Σ W(p)‖p − base‖₂)`, and a
/// restricted minimizer has `F(ξ) ≤ F(base)`, which gives the radius.
pub fn plane_patch(body: &Body, wp: &WeightedPoints, base: &[f64], basis: &[Vec<f64>]) -> BoundRegion {
    let lower = body.norm_equivalence_constants().lower;
    let spread: f64 = wp
        .points()
        .iter()
        .zip(wp.weights())
        .map(|(p, w)| w * linalg::dist(p, base))
        .sum();
    let radius = objective(body, wp, base) / lower + spread;
    BoundRegion::Patch {
        base: base.to_vec(),
        basis: basis.to_vec(),
        radius: radius * (1.0 + 1e-9),
    }
}

struct Frame {
    span: AffineSpan,
    reduced: Vec<Vec<f64>>,
    radius: Option<f64>,
}

fn frame(wp: &WeightedPoints, region: &BoundRegion) -> Result<Frame> {
    Ok(match region {
        BoundRegion::Hull => {
            let span = geometry::affine_span(wp.points())?;
            let reduced = wp.points().iter().map(|p| span.coords(p)).collect();
            Frame {
                span,
                reduced,
                radius: None,
            }
        }
        BoundRegion::Patch {
            base,
            basis,
            radius,
        } => {
            if !(*radius >= 0.0 && radius.is_finite()) {
                return Err(Error::InvalidInput("patch radius must be finite".into()));
            }
            Frame {
                span: AffineSpan {
                    base: base.clone(),
                    basis: basis.clone(),
                    dim: basis.len(),
                },
                reduced: vec![],
                radius: Some(*radius),
            }
        }
    })
}

impl Frame {
    /// Euclidean distance (in reduced coordinates) from `s` to the region.
    fn distance(&self, s: &[f64]) -> f64 {
        match self.radius {
            Some(r) => (linalg::norm(s) - r).max(0.0),
            None => geometry::project_to_hull(s, &self.reduced)
                .map(|p| p.distance)
                // A failed projection keeps the cell rather than discarding it.
                .unwrap_or(0.0),
        }
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.span.dim;
        match self.radius {
            Some(r) => (vec![-r; d], vec![r; d]),
            None => {
                let mut lo = vec![f64::INFINITY; d];
                let mut hi = vec![f64::NEG_INFINITY; d];
                for s in &self.reduced {
                    for k in 0..d {
                        lo[k] = lo[k].min(s[k]);
                        hi[k] = hi[k].max(s[k]);
                    }
                }
                (lo, hi)
            }
        }
    }
}

/// `min F` over grid nodes of mesh `h` covering the region, minus `L·h·√d`.
///
/// Nodes are kept when they lie within the lattice covering radius `h√d/2` of
/// the region, so every region point has a kept node within that radius.
pub fn certified_lower_bound(
    body: &Body,
    wp: &WeightedPoints,
    region: &BoundRegion,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput("grid step must be positive".into()));
    }
    let fr = frame(wp, region)?;
    let d = fr.span.dim;
    if d == 0 {
        return Ok(objective(body, wp, &fr.span.base));
    }
    let lipschitz = body.norm_equivalence_constants().upper;
    let cover = h * (d as f64).sqrt() / 2.0;
    let (lo, hi) = fr.bounding_box();
    let counts: Vec<u128> = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| ((b - a + 2.0 * cover) / h).floor() as u128 + 1)
        .collect();
    let nodes: u128 = counts.iter().product();
    if nodes > GRID_CAP {
        return Err(Error::GridTooLarge {
            nodes,
            cap: GRID_CAP,
        });
    }
    let origin: Vec<f64> = lo.iter().map(|a| a - cover).collect();
    let mut best = f64::INFINITY;
    let mut idx = vec![0u128; d];
    'outer: loop {
        let s: Vec<f64> = (0..d).map(|k| origin[k] + idx[k] as f64 * h).collect();
        if fr.distance(&s) <= cover {
            best = best.min(objective(body, wp, &fr.span.lift(&s)));
        }
        for k in 0..d {
            idx[k] += 1;
            if idx[k] < counts[k] {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    Ok(best - lipschitz * h * (d as f64).sqrt())
}

/// Outcome of [`certified_lower_bound_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveBound {
    pub bound: f64,
    pub cells: usize,
    pub reached_target: bool,
}

struct Cell {
    key: f64,
    center: Vec<f64>,
    half: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on the cell lower bound.
        other.key.total_cmp(&self.key)
    }
}

/// Branch-and-bound refinement of the grid bound: cubes of half-width `w`
/// carry `F(center) − L·w·√d`, and the cube with the smallest bound is split
/// until that bound reaches `target` or `max_cells` evaluations are spent.
/// The returned bound is valid either way.
pub fn certified_lower_bound_adaptive(
    body: &Body,
    wp: &WeightedPoints,
    region: &BoundRegion,
    target: f64,
    max_cells: usize,
) -> Result<AdaptiveBound> {
    let fr = frame(wp, region)?;
    let d = fr.span.dim;
    if d == 0 {
        let v = objective(body, wp, &fr.span.base);
        return Ok(AdaptiveBound {
            bound: v,
            cells: 1,
            reached_target: v >= target,
        });
    }
    let lipschitz = body.norm_equivalence_constants().upper;
    let root_d = (d as f64).sqrt();
    let (lo, hi) = fr.bounding_box();
    let center: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
    let half = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| 0.5 * (b - a))
        .fold(0.0, f64::max)
        .max(1e-12);
    let eval = |c: &[f64], w: f64| -> Option<Cell> {
        if fr.distance(c) > w * root_d {
            return None;
        }
        let v = objective(body, wp, &fr.span.lift(c));
        Some(Cell {
            key: v - lipschitz * w * root_d,
            center: c.to_vec(),
            half: w,
        })
    };
    let mut heap = BinaryHeap::new();
    let mut cells = 1usize;
    if let Some(c) = eval(&center, half) {
        heap.push(c);
    }
    while let Some(cell) = heap.pop() {
        if cell.key >= target || cells >= max_cells {
            let bound = cell.key;
            return Ok(AdaptiveBound {
                bound,
                cells,
                reached_target: bound >= target,
            });
        }
        let w = cell.half / 2.0;
        for mask in 0..(1usize << d) {
            let c: Vec<f64> = (0..d)
                .map(|k| cell.center[k] + if mask >> k & 1 == 1 { w } else { -w })
                .collect();
            cells += 1;
            if let Some(child) = eval(&c, w) {
                heap.push(child);
            }
        }
    }
    // Every cell was discarded: the region is empty at this resolution.
    Ok(AdaptiveBound {
        bound: f64::INFINITY,
        cells,
        reached_target: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_hull_bound_is_zero() {
        let body = Body::euclidean_ball(3).unwrap();
        let wp = WeightedPoints::uniform(vec![vec![0.3, -0.2, 0.1]]).unwrap();
        let b = certified_lower_bound(&body, &wp, &BoundRegion::Hull, 0.1).unwrap();
        assert_eq!(b, 0.0);
    }

    #[test]
    fn grid_cap_is_enforced() {
        let body = Body::euclidean_ball(2).unwrap();
        let wp = WeightedPoints::uniform(vec![vec![0.0, 0.0], vec![10.0, 0.0], vec![0.0, 10.0]]).unwrap();
        let err = certified_lower_bound(&body, &wp, &BoundRegion::Hull, 1e-4).unwrap_err();
        assert!(matches!(err, Error::GridTooLarge { .. }));
    }
}
