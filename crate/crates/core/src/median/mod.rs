//! The weighted Fermat–Weber objective `F(ξ) = Σ W(p)·‖ξ − p‖_K` and its solvers.
//!
//! Medians need not be unique (a flat piece of ∂K can make the minimizer set
//! two-dimensional), so every comparison downstream is made on objective
//! values. The solvers return a certified lower bound alongside the best
//! point found.

mod certify;
mod cutting;
mod weiszfeld;

pub use certify::{
    certified_lower_bound, certified_lower_bound_adaptive, plane_patch, AdaptiveBound, BoundRegion,
};
pub use weiszfeld::weiszfeld;

use crate::body::Body;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::geometry::{self, AffineSpan};
use crate::linalg::{self, dot};
use crate::SectionFrame;
use cutting::Cut;
use serde::{Deserialize, Serialize};

/// A finite point set with a probability vector of weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeightedPoints")]
pub struct WeightedPoints {
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeightedPoints {
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl TryFrom<RawWeightedPoints> for WeightedPoints {
    type Error = Error;
    fn try_from(raw: RawWeightedPoints) -> Result<Self> {
        WeightedPoints::new(raw.points, raw.weights)
    }
}

impl WeightedPoints {
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("at least one point is required".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::InvalidInput(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        let dim = points[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("points must be finite".into()));
        }
        if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidInput("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("weights sum to {total}, not 1")));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if linalg::dist(&points[i], &points[j]) <= 1e-12 {
                    return Err(Error::InvalidInput(format!("points {i} and {j} coincide")));
                }
            }
        }
        Ok(Self { points, weights })
    }

    /// Rescales nonnegative raw weights to sum to one.
    pub fn normalized(points: Vec<Vec<f64>>, raw: Vec<f64>) -> Result<Self> {
        let total: f64 = raw.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidInput("weights must have a positive finite sum".into()));
        }
        Self::new(points, raw.iter().map(|w| w / total).collect())
    }

    pub fn uniform(points: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len().max(1);
        Self::new(points, vec![1.0 / n as f64; n])
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim()];
        for (p, w) in self.points.iter().zip(&self.weights) {
            linalg::axpy(&mut c, *w, p);
        }
        c
    }

    /// Applies `f` to every point, keeping the weights.
    pub fn map_points(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        Self::new(self.points.iter().map(|p| f(p)).collect(), self.weights.clone())
    }

    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                d = d.max(linalg::dist(&self.points[i], &self.points[j]));
            }
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    IterationCap,
    Stalled,
}

/// One approximate minimizer plus certificates.
///
/// `lower_bound` is a certified lower bound on the minimum over the region, so
/// `value − lower_bound` bounds the optimality gap. `residual` is the Euclidean
/// norm of the smallest (region-tangential) subgradient found at `minimizer`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MedianResult {
    pub minimizer: Vec<f64>,
    pub value: f64,
    pub lower_bound: f64,
    pub residual: f64,
    pub iterations: usize,
    pub status: Status,
}

impl MedianResult {
    pub fn is_converged(&self) -> bool {
        self.status == Status::Converged
    }
}

/// How a facial subdifferential is reduced to one subgradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    #[default]
    Average,
    First,
}

/// Feasible set for [`solve_constrained`].
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Whole,
    Hull,
    AffineSpan,
    /// `base + s·v₁ + t·v₂` for the frame's in-plane basis.
    Plane { base: Vec<f64>, frame: SectionFrame },
}

pub fn objective(body: &Body, wp: &WeightedPoints, xi: &[f64]) -> f64 {
    wp.points
        .iter()
        .zip(&wp.weights)
        .map(|(p, w)| w * body.gauge(&linalg::sub(xi, p)))
        .sum()
}

/// `Σ W(p)·g_p` with `g_p ∈ ∂‖·‖(ξ − p)` chosen by `rule`; `ξ` must avoid the data.
pub fn objective_subgradient(
    body: &Body,
    wp: &WeightedPoints,
    xi: &[f64],
    rule: TieRule,
) -> Result<Vec<f64>> {
    check_dims(body, wp)?;
    if xi.len() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: xi.len(),
        });
    }
    if wp.points.iter().any(|p| p.as_slice() == xi) {
        return Err(Error::Domain("ξ coincides with a data point".into()));
    }
    Ok(aggregate_subgradient(body, wp, xi, rule))
}

/// Same as [`objective_subgradient`] but taking `0 ∈ ∂‖·‖(0)` at data points.
pub(crate) fn aggregate_subgradient(
    body: &Body,
    wp: &WeightedPoints,
    xi: &[f64],
    rule: TieRule,
) -> Vec<f64> {
    aggregate_subgradient_rel(body, wp, xi, rule, Tolerances::default().active_rel)
}

/// With `rel = 0` only exact ties are averaged, so the result is an exact
/// subgradient rather than one of a nearby point. Cutting planes need that.
fn aggregate_subgradient_rel(
    body: &Body,
    wp: &WeightedPoints,
    xi: &[f64],
    rule: TieRule,
    rel: f64,
) -> Vec<f64> {
    let mut g = vec![0.0; xi.len()];
    for (p, w) in wp.points.iter().zip(&wp.weights) {
        let d = linalg::sub(xi, p);
        if *w == 0.0 || d.iter().all(|c| *c == 0.0) {
            continue;
        }
        let gens = body.generators(&d, rel);
        let gp = match rule {
            TieRule::Average if gens.len() > 1 => {
                let mut avg = vec![0.0; xi.len()];
                for gen in &gens {
                    linalg::axpy(&mut avg, 1.0 / gens.len() as f64, gen);
                }
                avg
            }
            TieRule::First if gens.len() > 1 => {
                crate::body::SubgradientSet {
                    kind: crate::body::SubgradientKind::Facial(gens),
                    base_point: d,
                }
                .first()
            }
            _ => gens.into_iter().next().unwrap(),
        };
        linalg::axpy(&mut g, *w, &gp);
    }
    g
}

fn check_dims(body: &Body, wp: &WeightedPoints) -> Result<()> {
    if wp.dim() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: wp.dim(),
        });
    }
    Ok(())
}

/// Euclidean distance from the origin to `Bᵀ ∂F(x)` where `B` is `basis`
/// (identity when `None`). Data points within `snap` of `x` contribute
/// `W(p)·B*` (the dual unit ball); faces within `rel` count as active.
pub fn subdifferential_distance(
    body: &Body,
    wp: &WeightedPoints,
    x: &[f64],
    basis: Option<&[Vec<f64>]>,
    snap: f64,
    rel: f64,
) -> f64 {
    let reduce = |g: &[f64]| -> Vec<f64> {
        match basis {
            Some(b) => b.iter().map(|v| dot(v, g)).collect(),
            None => g.to_vec(),
        }
    };
    let lift = |d: &[f64]| -> Vec<f64> {
        match basis {
            Some(b) => {
                let mut out = vec![0.0; x.len()];
                for (v, c) in b.iter().zip(d) {
                    linalg::axpy(&mut out, *c, v);
                }
                out
            }
            None => d.to_vec(),
        }
    };
    enum Term {
        Fixed(Vec<Vec<f64>>),
        Ball,
    }
    let mut terms = Vec::new();
    let mut fixed_sum: Option<Vec<f64>> = None;
    for (p, w) in wp.points.iter().zip(&wp.weights) {
        if *w == 0.0 {
            continue;
        }
        let d = linalg::sub(x, p);
        if linalg::norm(&d) <= snap {
            terms.push((*w, Term::Ball));
            continue;
        }
        let gens: Vec<Vec<f64>> = body.generators(&d, rel).iter().map(|g| reduce(g)).collect();
        if gens.len() == 1 {
            let s = fixed_sum.get_or_insert_with(|| vec![0.0; gens[0].len()]);
            linalg::axpy(s, *w, &gens[0]);
        } else {
            terms.push((*w, Term::Fixed(gens)));
        }
    }
    let rdim = basis.map_or(x.len(), |b| b.len());
    if rdim == 0 {
        return 0.0;
    }
    let offset = fixed_sum.unwrap_or_else(|| vec![0.0; rdim]);
    if terms.is_empty() {
        return linalg::norm(&offset);
    }
    let mut counter = 0usize;
    let mut lmo = |dir: &[f64]| -> (usize, Vec<f64>) {
        let mut atom = offset.clone();
        for (w, term) in &terms {
            match term {
                Term::Fixed(gens) => {
                    let g = gens
                        .iter()
                        .min_by(|a, b| dot(dir, a).total_cmp(&dot(dir, b)))
                        .unwrap();
                    linalg::axpy(&mut atom, *w, g);
                }
                Term::Ball => {
                    let full = lift(dir);
                    if full.iter().any(|c| *c != 0.0) {
                        let g = body.generators(&full, 0.0).swap_remove(0);
                        linalg::axpy(&mut atom, -*w, &reduce(&g));
                    }
                }
            }
        }
        counter += 1;
        (counter, atom)
    };
    let start = lmo(&offset.iter().map(|c| -c).collect::<Vec<_>>());
    let scale = linalg::dot(&start.1, &start.1).max(1e-300);
    match geometry::min_norm_point(start, lmo, 1e-20 * scale, 2_000) {
        Ok(mn) | Err(mn) => linalg::norm(&mn.point),
    }
}

/// Whether data point `index` minimizes `F`: `0 ∈ ∂F(p)`, i.e. the aggregated
/// pull of the other points has dual norm at most `W(p)`.
pub fn data_point_optimal(body: &Body, wp: &WeightedPoints, index: usize) -> bool {
    let p = &wp.points[index];
    let rel = Tolerances::default().active_rel;
    let mut pull = vec![0.0; p.len()];
    let mut facial = false;
    for (i, (q, w)) in wp.points.iter().zip(&wp.weights).enumerate() {
        if i == index || *w == 0.0 {
            continue;
        }
        let gens = body.generators(&linalg::sub(p, q), rel);
        facial |= gens.len() > 1;
        linalg::axpy(&mut pull, *w, &gens[0]);
    }
    let wi = wp.weights[index];
    if !facial {
        return body.dual_gauge(&pull) <= wi * (1.0 + 1e-12) + 1e-15;
    }
    let scale = linalg::norm(&pull).max(wi).max(1e-300);
    subdifferential_distance(body, wp, p, None, 0.0, rel) <= 1e-9 * scale
}

/// Minimizes `F` over the whole space.
pub fn solve_unconstrained(body: &Body, wp: &WeightedPoints) -> Result<MedianResult> {
    solve_constrained_with(body, wp, &Region::Whole, &Tolerances::default())
}

pub fn solve_unconstrained_with(
    body: &Body,
    wp: &WeightedPoints,
    tol: &Tolerances,
) -> Result<MedianResult> {
    solve_constrained_with(body, wp, &Region::Whole, tol)
}

/// Minimizes `F` over `conv(P)`, the affine span of `P`, or a frame plane.
pub fn solve_constrained(body: &Body, wp: &WeightedPoints, region: &Region) -> Result<MedianResult> {
    solve_constrained_with(body, wp, region, &Tolerances::default())
}

pub fn solve_constrained_with(
    body: &Body,
    wp: &WeightedPoints,
    region: &Region,
    tol: &Tolerances,
) -> Result<MedianResult> {
    check_dims(body, wp)?;
    let dim = body.dim();
    let span = match region {
        Region::Whole => full_span(wp.centroid(), dim),
        Region::Hull | Region::AffineSpan => {
            let s = geometry::affine_span_with(&wp.points, tol.rank_rel)?;
            if s.dim == dim {
                full_span(s.base, dim)
            } else {
                s
            }
        }
        Region::Plane { base, frame } => {
            if base.len() != dim || dim != 3 {
                return Err(Error::InvalidInput("plane regions live in ℝ³".into()));
            }
            frame.validate()?;
            AffineSpan {
                base: base.clone(),
                basis: frame.basis.to_vec(),
                dim: 2,
            }
        }
    };
    let hull = matches!(region, Region::Hull);
    let reduced: Vec<Vec<f64>> = wp.points.iter().map(|p| span.coords(p)).collect();
    let scale_pts = reduced.iter().map(|s| linalg::norm(s)).fold(1.0, f64::max);

    // Start: hull centroid (always feasible) or the weighted centroid.
    let center: Vec<f64> = if hull {
        let mut c = vec![0.0; span.dim];
        for s in &reduced {
            linalg::axpy(&mut c, 1.0 / reduced.len() as f64, s);
        }
        c
    } else {
        span.coords(&wp.centroid())
    };
    let f_center = objective(body, wp, &span.lift(&center));
    let radius = if hull {
        reduced
            .iter()
            .map(|s| linalg::dist(s, &center))
            .fold(0.0, f64::max)
            * (1.0 + 1e-9)
            + 1e-12 * scale_pts
    } else {
        let bounds = body.norm_equivalence_constants();
        let c = span.lift(&center);
        let spread = wp.points.iter().map(|p| linalg::dist(p, &c)).fold(0.0, f64::max);
        (f_center / bounds.lower + spread) * 1.01 + 1e-12 * scale_pts
    };

    // Data points are feasible for every region except a generic plane.
    let mut candidates = Vec::new();
    let on_region = |p: &[f64]| !matches!(region, Region::Plane { .. }) || span.distance(p) <= 1e-12 * scale_pts;
    for (i, (p, s)) in wp.points.iter().zip(&reduced).enumerate() {
        if !on_region(p) {
            continue;
        }
        let v = objective(body, wp, p);
        if matches!(region, Region::Whole) && data_point_optimal(body, wp, i) {
            return Ok(MedianResult {
                minimizer: p.clone(),
                value: v,
                lower_bound: v,
                residual: 0.0,
                iterations: 0,
                status: Status::Converged,
            });
        }
        candidates.push((s.clone(), v));
    }

    let oracle = |s: &[f64]| {
        let x = span.lift(s);
        let v = objective(body, wp, &x);
        let g = aggregate_subgradient_rel(body, wp, &x, TieRule::Average, 0.0);
        let g = span.basis.iter().map(|b| dot(b, &g)).collect::<Vec<_>>();
        (v, g)
    };
    let halfspaces = if hull { hull_halfspaces(&reduced) } else { Vec::new() };
    let feasibility = |s: &[f64]| -> Option<Cut> {
        let (normal, offset) = halfspaces
            .iter()
            .max_by(|a, b| (dot(&a.0, s) - a.1).total_cmp(&(dot(&b.0, s) - b.1)))?;
        let depth = dot(normal, s) - offset;
        (depth > 0.0).then(|| Cut {
            normal: normal.clone(),
            depth,
        })
    };
    let abs_tol = tol.value_tol * f_center.max(1e-300);
    let out = cutting::minimize(
        center,
        radius,
        &candidates,
        oracle,
        feasibility,
        abs_tol,
        tol.solver_max_iter,
    );
    let minimizer = span.lift(&out.x);
    let value = objective(body, wp, &minimizer);
    let snap = 1e-9 * scale_pts;
    let basis = (span.dim < dim).then_some(span.basis.as_slice());
    let mut residual = subdifferential_distance(body, wp, &minimizer, basis, snap, tol.residual_active_rel);
    if hull && residual > 0.0 {
        residual = residual.min(hull_stationarity(body, wp, &span, &reduced, &out.x));
    }
    let status = if out.converged {
        Status::Converged
    } else if out.iterations >= tol.solver_max_iter {
        Status::IterationCap
    } else {
        Status::Stalled
    };
    Ok(MedianResult {
        minimizer,
        value,
        lower_bound: out.lower_bound.min(value),
        residual,
        iterations: out.iterations,
        status,
    })
}

/// Halfspaces `⟨n, y⟩ ≤ c` whose intersection is `conv(points)`, for points
/// spanning their space (dimension ≤ 3). Each candidate normal comes from a
/// subset of the points and its offset is the exact maximum over all points,
/// so every halfspace contains the hull whatever the rounding in `n`.
fn hull_halfspaces(points: &[Vec<f64>]) -> Vec<(Vec<f64>, f64)> {
    let d = points[0].len();
    let m = points.len();
    let mut normals: Vec<Vec<f64>> = Vec::new();
    let scale = points.iter().map(|p| linalg::norm(p)).fold(1e-300, f64::max);
    match d {
        1 => normals.push(vec![1.0]),
        2 => {
            for i in 0..m {
                for j in i + 1..m {
                    let e = linalg::sub(&points[j], &points[i]);
                    normals.push(vec![-e[1], e[0]]);
                }
            }
        }
        _ => {
            for i in 0..m {
                for j in i + 1..m {
                    for k in j + 1..m {
                        let e1 = linalg::sub(&points[j], &points[i]);
                        let e2 = linalg::sub(&points[k], &points[i]);
                        normals.push(linalg::cross(&e1, &e2));
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for n in normals {
        let len = linalg::norm(&n);
        if len <= 1e-12 * scale.powi(d as i32 - 1) {
            continue;
        }
        let n = linalg::scale(&n, 1.0 / len);
        for sign in [1.0, -1.0] {
            let n = linalg::scale(&n, sign);
            let values: Vec<f64> = points.iter().map(|p| dot(&n, p)).collect();
            let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            // Keep supporting planes only: at least `d` points on them.
            let touching = values.iter().filter(|v| **v >= top - 1e-12 * scale).count();
            if touching >= d {
                out.push((n, top));
            }
        }
    }
    out
}

fn full_span(base: Vec<f64>, dim: usize) -> AffineSpan {
    AffineSpan {
        base,
        basis: (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect(),
        dim,
    }
}

/// Frank–Wolfe gap `max_p ⟨−g, p − x⟩` of the averaged subgradient, divided by
/// the hull diameter; zero at interior optima and small at boundary optima.
fn hull_stationarity(
    body: &Body,
    wp: &WeightedPoints,
    span: &AffineSpan,
    reduced: &[Vec<f64>],
    s: &[f64],
) -> f64 {
    let x = span.lift(s);
    let g = aggregate_subgradient(body, wp, &x, TieRule::Average);
    let g: Vec<f64> = span.basis.iter().map(|b| dot(b, &g)).collect();
    let diam = reduced
        .iter()
        .flat_map(|a| reduced.iter().map(move |b| linalg::dist(a, b)))
        .fold(0.0, f64::max)
        .max(1e-300);
    let gap = reduced
        .iter()
        .map(|p| -dot(&g, &linalg::sub(p, s)))
        .fold(0.0, f64::max);
    gap / diam
}

#[cfg(test)]
mod tests;
