//! Euclidean convex-hull primitives for small point sets: nearest points,
//! separating hyperplanes and affine spans. Nothing here depends on a body.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Nearest point of `conv(P)` to a query, with barycentric weights over `P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullProjection {
    pub distance: f64,
    pub nearest: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub iterations: usize,
}

/// Hyperplane through the nearest hull point with unit normal pointing at the query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Separator {
    pub normal: Vec<f64>,
    pub margin: f64,
    pub nearest: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineSpan {
    pub base: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
    pub dim: usize,
}

impl AffineSpan {
    /// Coordinates of the orthogonal projection of `x` in the span's basis.
    pub fn coords(&self, x: &[f64]) -> Vec<f64> {
        let d = linalg::sub(x, &self.base);
        self.basis.iter().map(|b| dot(b, &d)).collect()
    }

    pub fn lift(&self, s: &[f64]) -> Vec<f64> {
        let mut out = self.base.clone();
        for (b, c) in self.basis.iter().zip(s) {
            linalg::axpy(&mut out, *c, b);
        }
        out
    }

    /// Euclidean distance from `x` to the span.
    pub fn distance(&self, x: &[f64]) -> f64 {
        linalg::dist(x, &self.lift(&self.coords(x)))
    }
}

pub(crate) struct MinNorm {
    pub point: Vec<f64>,
    pub atoms: Vec<(usize, Vec<f64>)>,
    pub weights: Vec<f64>,
    pub iterations: usize,
    pub gap: f64,
}

const WEIGHT_EPS: f64 = 1e-14;

/// Wolfe's nearest-point-to-origin iteration over a compact convex set given
/// by a linear minimization oracle `x ↦ argmin_{s} ⟨x, s⟩`.
///
/// Atoms are tagged with an id so callers can recover barycentric weights.
/// Converged when `⟨x, x⟩ − ⟨x, s⟩ ≤ gap_tol`. On the iteration cap the best
/// iterate comes back in `Err`.
pub(crate) fn min_norm_point(
    first: (usize, Vec<f64>),
    mut lmo: impl FnMut(&[f64]) -> (usize, Vec<f64>),
    gap_tol: f64,
    max_iter: usize,
) -> std::result::Result<MinNorm, MinNorm> {
    let mut atoms = vec![first];
    let mut weights = vec![1.0];
    let mut x = atoms[0].1.clone();
    let mut gap = f64::INFINITY;
    for it in 0..max_iter {
        let (id, q) = lmo(&x);
        gap = dot(&x, &x) - dot(&x, &q);
        let stalled = atoms.iter().any(|(aid, a)| *aid == id || a == &q);
        if gap <= gap_tol || stalled {
            return Ok(MinNorm {
                point: x,
                atoms,
                weights,
                iterations: it,
                gap: gap.max(0.0),
            });
        }
        atoms.push((id, q));
        weights.push(0.0);
        loop {
            let alpha = affine_minimizer(&atoms);
            if alpha.iter().all(|a| *a > WEIGHT_EPS) {
                weights = alpha;
                break;
            }
            // Largest step towards `alpha` that keeps every weight nonnegative;
            // an atom whose affine weight is at most WEIGHT_EPS always leaves.
            let mut theta = f64::INFINITY;
            let mut drop = 0;
            for (i, (a, l)) in alpha.iter().zip(&weights).enumerate() {
                if *a <= WEIGHT_EPS {
                    let t = if l - a > 0.0 { (l / (l - a)).min(1.0) } else { 0.0 };
                    if t < theta {
                        theta = t;
                        drop = i;
                    }
                }
            }
            for (l, a) in weights.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            weights[drop] = 0.0;
            let mut i = 0;
            while i < atoms.len() {
                if weights[i] <= WEIGHT_EPS {
                    atoms.remove(i);
                    weights.remove(i);
                } else {
                    i += 1;
                }
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            if atoms.len() == 1 {
                break;
            }
        }
        x = combine(&atoms, &weights);
    }
    Err(MinNorm {
        point: x,
        atoms,
        weights,
        iterations: max_iter,
        gap,
    })
}

fn combine(atoms: &[(usize, Vec<f64>)], weights: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; atoms[0].1.len()];
    for ((_, a), w) in atoms.iter().zip(weights) {
        linalg::axpy(&mut x, *w, a);
    }
    x
}

/// Weights summing to one of the min-norm point of the affine hull of the atoms.
fn affine_minimizer(atoms: &[(usize, Vec<f64>)]) -> Vec<f64> {
    let k = atoms.len();
    if k == 1 {
        return vec![1.0];
    }
    let dim = atoms[0].1.len();
    let s0 = &atoms[0].1;
    let d = DMatrix::from_fn(dim, k - 1, |i, j| atoms[j + 1].1[i] - s0[i]);
    let rhs = DVector::from_iterator(dim, s0.iter().map(|v| -v));
    let svd = d.svd(true, true);
    let top = svd.singular_values.max();
    let beta = svd
        .solve(&rhs, 1e-13 * top.max(1e-300))
        .unwrap_or_else(|_| DVector::zeros(k - 1));
    let mut alpha = Vec::with_capacity(k);
    alpha.push(1.0 - beta.sum());
    alpha.extend(beta.iter());
    alpha
}

/// Euclidean projection of `query` onto `conv(points)`.
pub fn project_to_hull(query: &[f64], points: &[Vec<f64>]) -> Result<HullProjection> {
    project_to_hull_with(query, points, &Tolerances::default())
}

pub fn project_to_hull_with(
    query: &[f64],
    points: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<HullProjection> {
    if points.is_empty() {
        return Err(Error::InvalidInput("empty point set".into()));
    }
    if let Some(bad) = points.iter().find(|p| p.len() != query.len()) {
        return Err(Error::DimensionMismatch {
            expected: query.len(),
            got: bad.len(),
        });
    }
    if points.iter().flatten().chain(query).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("points must be finite".into()));
    }
    let shifted: Vec<Vec<f64>> = points.iter().map(|p| linalg::sub(p, query)).collect();
    let scale = shifted.iter().map(|a| dot(a, a)).fold(1.0, f64::max);
    let closest = (0..shifted.len())
        .min_by(|&a, &b| norm(&shifted[a]).total_cmp(&norm(&shifted[b])))
        .unwrap();
    let lmo = |x: &[f64]| {
        let i = (0..shifted.len())
            .min_by(|&a, &b| dot(x, &shifted[a]).total_cmp(&dot(x, &shifted[b])))
            .unwrap();
        (i, shifted[i].clone())
    };
    let outcome = min_norm_point(
        (closest, shifted[closest].clone()),
        lmo,
        tol.hull_gap * scale,
        tol.hull_max_iter,
    );
    let mn = match outcome {
        Ok(mn) => mn,
        Err(mn) => {
            return Err(Error::IterationCap {
                cap: tol.hull_max_iter,
                best: linalg::add(&mn.point, query),
                gap: mn.gap,
            })
        }
    };
    let mut coefficients = vec![0.0; points.len()];
    for ((id, _), w) in mn.atoms.iter().zip(&mn.weights) {
        coefficients[*id] += w.max(0.0);
    }
    let total: f64 = coefficients.iter().sum();
    coefficients.iter_mut().for_each(|c| *c /= total);
    let mut nearest = vec![0.0; query.len()];
    for (p, c) in points.iter().zip(&coefficients) {
        linalg::axpy(&mut nearest, *c, p);
    }
    Ok(HullProjection {
        distance: linalg::dist(query, &nearest),
        nearest,
        coefficients,
        iterations: mn.iterations,
    })
}

/// Separating hyperplane between a query outside `conv(points)` and the hull.
///
/// The normal is `(query − nearest)/distance`; every `p` satisfies
/// `⟨normal, p − nearest⟩ ≤ 0` up to rounding and `⟨normal, query − nearest⟩ = margin`.
pub fn separating_hyperplane(query: &[f64], points: &[Vec<f64>]) -> Result<Separator> {
    let proj = project_to_hull(query, points)?;
    let scale = points
        .iter()
        .map(|p| linalg::dist(p, query))
        .fold(1.0, f64::max);
    if proj.distance <= 1e-12 * scale {
        return Err(Error::Domain("query lies inside the convex hull".into()));
    }
    let normal = linalg::scale(&linalg::sub(query, &proj.nearest), 1.0 / proj.distance);
    Ok(Separator {
        normal,
        margin: proj.distance,
        nearest: proj.nearest,
    })
}

/// Affine span of a point set, with rank cutoff relative to the largest singular value.
pub fn affine_span(points: &[Vec<f64>]) -> Result<AffineSpan> {
    affine_span_with(points, Tolerances::default().rank_rel)
}

pub fn affine_span_with(points: &[Vec<f64>], rel: f64) -> Result<AffineSpan> {
    let base = points
        .first()
        .ok_or_else(|| Error::InvalidInput("empty point set".into()))?
        .clone();
    let dim = base.len();
    if points.len() == 1 {
        return Ok(AffineSpan {
            base,
            basis: vec![],
            dim: 0,
        });
    }
    let diffs = DMatrix::from_fn(dim, points.len() - 1, |i, j| points[j + 1][i] - base[i]);
    let svd = diffs.svd(true, false);
    let u = svd.u.expect("requested U");
    let top = svd.singular_values.max();
    let mut basis = Vec::new();
    if top > 0.0 {
        for (k, s) in svd.singular_values.iter().enumerate() {
            if *s > rel * top {
                basis.push(u.column(k).iter().copied().collect::<Vec<f64>>());
            }
        }
    }
    // Orient each basis vector deterministically.
    for b in basis.iter_mut() {
        let lead = b.iter().copied().find(|c| c.abs() > 1e-12).unwrap_or(1.0);
        if lead < 0.0 {
            b.iter_mut().for_each(|c| *c = -*c);
        }
    }
    Ok(AffineSpan {
        dim: basis.len(),
        base,
        basis,
    })
}
