//! Symmetric convex bodies and the norm oracles they induce.
//!
//! A [`Body`] is a closed tagged family: ellipsoids, weighted ℓp balls,
//! polytopes given by functionals or by generators, invertible linear images
//! and central planar sections. Each variant supplies an exact gauge, support
//! function and subdifferential, which is what the median and intuitiveness
//! machinery relies on.

mod json;
mod polytope;

pub use json::BodySpec;
pub(crate) use polytope::Polytope;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, mat_t_vec, mat_vec, norm};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// `{x : xᵀAx ≤ 1}` with `A` symmetric positive definite.
    Ellipsoid {
        matrix: DMatrix<f64>,
        inverse: DMatrix<f64>,
    },
    /// `{x : Σ |xᵢ/sᵢ|ᵖ ≤ 1}`.
    LpBall { p: f64, scales: Vec<f64> },
    /// `{x : |⟨aᵢ, x⟩| ≤ 1 ∀i}`.
    HPolytope {
        functionals: Vec<Vec<f64>>,
        hull: Polytope,
    },
    /// `conv{±vᵢ}`.
    VPolytope {
        generators: Vec<Vec<f64>>,
        hull: Polytope,
    },
    /// `T · inner`.
    LinearImage {
        map: DMatrix<f64>,
        inverse: DMatrix<f64>,
        inner: Box<Body>,
    },
    /// `inner ∩ u^⊥` in the coordinates of an orthonormal frame of `u^⊥`.
    Section {
        frame: SectionFrame,
        inner: Box<Body>,
        inner_upper: f64,
    },
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "BodySpec", into = "BodySpec")]
pub struct Body {
    dim: usize,
    shape: Shape,
    bounds: OnceLock<NormBounds>,
}

impl std::fmt::Debug for Body {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Body")
            .field("dim", &self.dim)
            .field("shape", &self.shape)
            .finish()
    }
}

impl PartialEq for Body {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.shape == other.shape
    }
}

/// Generators of the subdifferential of the gauge at a nonzero point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgradientKind {
    Smooth(Vec<f64>),
    Facial(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgradientSet {
    pub kind: SubgradientKind,
    pub base_point: Vec<f64>,
}

impl SubgradientSet {
    pub fn generators(&self) -> &[Vec<f64>] {
        match &self.kind {
            SubgradientKind::Smooth(g) => std::slice::from_ref(g),
            SubgradientKind::Facial(gs) => gs,
        }
    }

    pub fn is_smooth(&self) -> bool {
        matches!(self.kind, SubgradientKind::Smooth(_))
    }

    /// Barycenter of the generators; always a member of the set.
    pub fn average(&self) -> Vec<f64> {
        let gens = self.generators();
        let mut out = vec![0.0; gens[0].len()];
        for g in gens {
            linalg::axpy(&mut out, 1.0 / gens.len() as f64, g);
        }
        out
    }

    /// Lexicographically smallest generator.
    pub fn first(&self) -> Vec<f64> {
        let mut gens = self.generators().to_vec();
        gens.sort_by(|a, b| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        gens.swap_remove(0)
    }

    /// Whether `g` lies in the convex hull of the generators.
    pub fn contains(&self, g: &[f64], tol: f64) -> bool {
        match crate::geometry::project_to_hull(g, self.generators()) {
            Ok(proj) => proj.distance <= tol,
            Err(_) => false,
        }
    }
}

/// Orthonormal frame `(u; v₁, v₂)` of a central plane `u^⊥` in ℝ³.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionFrame {
    pub normal: Vec<f64>,
    pub basis: [Vec<f64>; 2],
}

impl SectionFrame {
    pub fn new(normal: Vec<f64>, v1: Vec<f64>, v2: Vec<f64>) -> Result<Self> {
        let frame = Self {
            normal,
            basis: [v1, v2],
        };
        frame.validate()?;
        Ok(frame)
    }

    /// Frame of `u^⊥` for any nonzero `u`, with a deterministic completion.
    pub fn from_normal(u: &[f64]) -> Result<Self> {
        if u.len() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: u.len(),
            });
        }
        let n = norm(u);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Domain("frame normal must be a finite nonzero vector".into()));
        }
        let u = linalg::scale(u, 1.0 / n);
        let (v1, v2) = linalg::complete_basis(&u);
        Self::new(u, v1, v2)
    }

    pub fn validate(&self) -> Result<()> {
        let [v1, v2] = &self.basis;
        if self.normal.len() != 3 || v1.len() != 3 || v2.len() != 3 {
            return Err(Error::InvalidInput("section frames live in ℝ³".into()));
        }
        let tol = 1e-12;
        let ok = dot(&self.normal, v1).abs() <= tol
            && dot(&self.normal, v2).abs() <= tol
            && dot(v1, v2).abs() <= tol
            && (norm(&self.normal) - 1.0).abs() <= tol
            && (norm(v1) - 1.0).abs() <= tol
            && (norm(v2) - 1.0).abs() <= tol;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput("section frame is not orthonormal".into()))
        }
    }

    /// `s·v₁ + t·v₂`.
    pub fn lift(&self, st: &[f64]) -> Vec<f64> {
        let [v1, v2] = &self.basis;
        (0..3).map(|i| st[0] * v1[i] + st[1] * v2[i]).collect()
    }

    /// Coordinates of the orthogonal projection onto the plane.
    pub fn coords(&self, x: &[f64]) -> Vec<f64> {
        vec![dot(&self.basis[0], x), dot(&self.basis[1], x)]
    }
}

/// Euclidean norm-equivalence constants `lower·‖x‖₂ ≤ ‖x‖_K ≤ upper·‖x‖₂`.
///
/// `samples` is set when the constants come from a certified sphere sampling
/// rather than a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBounds {
    pub lower: f64,
    pub upper: f64,
    pub samples: Option<usize>,
}

impl Body {
    pub fn ellipsoid(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let m = linalg::rows_to_matrix(&matrix)
            .ok_or_else(|| Error::InvalidBody("ellipsoid matrix is ragged or empty".into()))?;
        Self::ellipsoid_from_matrix(m)
    }

    pub fn ellipsoid_from_matrix(m: DMatrix<f64>) -> Result<Self> {
        let dim = m.nrows();
        check_dim(dim)?;
        if m.ncols() != dim {
            return Err(Error::InvalidBody("ellipsoid matrix must be square".into()));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidBody("ellipsoid matrix must be finite".into()));
        }
        let scale = m.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let asym = (&m - m.transpose()).iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if asym > 1e-12 * scale.max(1.0) {
            return Err(Error::InvalidBody("ellipsoid matrix must be symmetric".into()));
        }
        let sym = (&m + m.transpose()) * 0.5;
        let eig = sym.clone().symmetric_eigen();
        let min = eig.eigenvalues.min();
        if !(min > 0.0) {
            return Err(Error::InvalidBody(format!(
                "ellipsoid matrix is not positive definite (smallest eigenvalue {min:e})"
            )));
        }
        let inverse = sym
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidBody("ellipsoid matrix is singular".into()))?;
        Ok(Self {
            bounds: OnceLock::new(),
            dim,
            shape: Shape::Ellipsoid {
                matrix: sym,
                inverse,
            },
        })
    }

    /// Axis-aligned ellipsoid with the given semi-axis lengths.
    pub fn ellipsoid_axes(semi_axes: &[f64]) -> Result<Self> {
        if semi_axes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidBody("semi-axes must be positive".into()));
        }
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            semi_axes.len(),
            semi_axes.iter().map(|a| 1.0 / (a * a)),
        ));
        Self::ellipsoid_from_matrix(m)
    }

    pub fn euclidean_ball(dim: usize) -> Result<Self> {
        Self::lp_ball(dim, 2.0)
    }

    pub fn lp_ball(dim: usize, p: f64) -> Result<Self> {
        Self::lp_ball_scaled(p, vec![1.0; dim])
    }

    pub fn lp_ball_scaled(p: f64, scales: Vec<f64>) -> Result<Self> {
        let dim = scales.len();
        check_dim(dim)?;
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidBody(format!("ℓp exponent must be finite and ≥ 1, got {p}")));
        }
        if scales.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidBody("ℓp scales must be positive".into()));
        }
        Ok(Self {
            bounds: OnceLock::new(),
            dim,
            shape: Shape::LpBall { p, scales },
        })
    }

    /// The unit ℓ∞ ball written as an H-polytope.
    pub fn cube(dim: usize) -> Result<Self> {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::h_polytope(rows)
    }

    pub fn h_polytope(functionals: Vec<Vec<f64>>) -> Result<Self> {
        let dim = functionals
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidBody("no functionals".into()))?;
        check_dim(dim)?;
        let hull = Polytope::from_functionals(dim, &functionals)?;
        Ok(Self {
            bounds: OnceLock::new(),
            dim,
            shape: Shape::HPolytope { functionals, hull },
        })
    }

    pub fn v_polytope(generators: Vec<Vec<f64>>) -> Result<Self> {
        let dim = generators
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidBody("no generators".into()))?;
        check_dim(dim)?;
        let hull = Polytope::from_generators(dim, &generators)?;
        Ok(Self {
            bounds: OnceLock::new(),
            dim,
            shape: Shape::VPolytope { generators, hull },
        })
    }

    /// `T · self`; rejected when `|det T|` is below the configured floor.
    pub fn apply_linear(&self, map: Vec<Vec<f64>>) -> Result<Self> {
        let t = linalg::rows_to_matrix(&map)
            .ok_or_else(|| Error::InvalidBody("linear map is ragged or empty".into()))?;
        self.apply_linear_matrix(t)
    }

    pub fn apply_linear_matrix(&self, t: DMatrix<f64>) -> Result<Self> {
        if t.nrows() != self.dim || t.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: t.nrows(),
            });
        }
        if t.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidBody("linear map must be finite".into()));
        }
        let det = t.determinant();
        let floor = Tolerances::default().det_floor;
        if !(det.abs() > floor) {
            return Err(Error::InvalidBody(format!(
                "linear map is near-singular (|det| = {:e} ≤ {floor:e})",
                det.abs()
            )));
        }
        let inverse = t
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidBody("linear map is singular".into()))?;
        Ok(Self {
            bounds: OnceLock::new(),
            dim: self.dim,
            shape: Shape::LinearImage {
                map: t,
                inverse,
                inner: Box::new(self.clone()),
            },
        })
    }

    /// Central section through the plane of `frame`, as a body in frame coordinates.
    pub fn section(&self, frame: &SectionFrame) -> Result<Self> {
        if self.dim != 3 {
            return Err(Error::Domain("sections are taken of three-dimensional bodies".into()));
        }
        frame.validate()?;
        let [v1, v2] = &frame.basis;
        match &self.shape {
            Shape::Ellipsoid { matrix, .. } => {
                let a1 = mat_vec(matrix, v1);
                let a2 = mat_vec(matrix, v2);
                let m = DMatrix::from_row_slice(2, 2, &[dot(v1, &a1), dot(v1, &a2), dot(v2, &a1), dot(v2, &a2)]);
                // Symmetrize exactly; the two off-diagonal products can differ in the last ulp.
                Self::ellipsoid_from_matrix((&m + m.transpose()) * 0.5)
            }
            Shape::LpBall { p, scales } => match (axis_of(v1), axis_of(v2)) {
                (Some(a), Some(b)) if a != b => Self::lp_ball_scaled(*p, vec![scales[a], scales[b]]),
                _ => self.section_wrapper(frame),
            },
            Shape::HPolytope { hull, .. } => {
                let rows: Vec<Vec<f64>> = hull
                    .functionals
                    .iter()
                    .map(|a| vec![dot(a, v1), dot(a, v2)])
                    .filter(|r| norm(r) > 1e-12)
                    .collect();
                Self::h_polytope(rows)
            }
            _ => self.section_wrapper(frame),
        }
    }

    fn section_wrapper(&self, frame: &SectionFrame) -> Result<Self> {
        let inner_upper = self.norm_equivalence_constants().upper;
        Ok(Self {
            bounds: OnceLock::new(),
            dim: 2,
            shape: Shape::Section {
                frame: frame.clone(),
                inner: Box::new(self.clone()),
                inner_upper,
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Short human-readable tag.
    pub fn kind(&self) -> &'static str {
        match &self.shape {
            Shape::Ellipsoid { .. } => "ellipsoid",
            Shape::LpBall { .. } => "lp_ball",
            Shape::HPolytope { .. } => "h_polytope",
            Shape::VPolytope { .. } => "v_polytope",
            Shape::LinearImage { .. } => "linear_image",
            Shape::Section { .. } => "section",
        }
    }

    /// Whether the gauge is differentiable away from the origin.
    pub fn is_smooth(&self) -> bool {
        match &self.shape {
            Shape::Ellipsoid { .. } => true,
            Shape::LpBall { p, .. } => *p > 1.0,
            Shape::HPolytope { .. } | Shape::VPolytope { .. } => false,
            Shape::LinearImage { inner, .. } | Shape::Section { inner, .. } => inner.is_smooth(),
        }
    }

    /// Vertices of a polytope body, one per `±` pair.
    pub fn polytope_vertices(&self) -> Option<&[Vec<f64>]> {
        match &self.shape {
            Shape::HPolytope { hull, .. } | Shape::VPolytope { hull, .. } => Some(&hull.vertices),
            _ => None,
        }
    }

    /// Whether the body is an ellipsoid by construction.
    pub fn is_ellipsoid(&self) -> bool {
        match &self.shape {
            Shape::Ellipsoid { .. } => true,
            Shape::LpBall { p, .. } => *p == 2.0,
            Shape::HPolytope { .. } | Shape::VPolytope { .. } => false,
            Shape::LinearImage { inner, .. } | Shape::Section { inner, .. } => inner.is_ellipsoid(),
        }
    }

    /// Minkowski gauge `‖x‖_K = inf{t > 0 : x ∈ tK}`.
    pub fn gauge(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        match &self.shape {
            Shape::Ellipsoid { matrix, .. } => quad_form(matrix, x).max(0.0).sqrt(),
            Shape::LpBall { p, scales } => lp_norm(x, scales, *p),
            Shape::HPolytope { hull, .. } | Shape::VPolytope { hull, .. } => hull.gauge(x),
            Shape::LinearImage { inverse, inner, .. } => inner.gauge(&mat_vec(inverse, x)),
            Shape::Section { frame, inner, .. } => inner.gauge(&frame.lift(x)),
        }
    }

    /// Support function `h_K(g) = max_{x ∈ K} ⟨g, x⟩`, the dual norm.
    pub fn dual_gauge(&self, g: &[f64]) -> f64 {
        debug_assert_eq!(g.len(), self.dim);
        match &self.shape {
            Shape::Ellipsoid { inverse, .. } => quad_form(inverse, g).max(0.0).sqrt(),
            Shape::LpBall { p, scales } => {
                let weighted: Vec<f64> = g.iter().zip(scales).map(|(gi, s)| gi * s).collect();
                if *p == 1.0 {
                    linalg::max_abs(&weighted)
                } else {
                    let q = *p / (*p - 1.0);
                    lp_norm(&weighted, &vec![1.0; g.len()], q)
                }
            }
            Shape::HPolytope { hull, .. } | Shape::VPolytope { hull, .. } => hull.support(g),
            Shape::LinearImage { map, inner, .. } => inner.dual_gauge(&mat_t_vec(map, g)),
            Shape::Section {
                frame,
                inner,
                inner_upper,
            } => {
                // Dual of a restricted norm is the quotient norm:
                // h_{K∩H}(g) = min_t h_K(lift(g) + t·u), a convex problem in t.
                let lifted = frame.lift(g);
                let at_zero = inner.dual_gauge(&lifted);
                if at_zero == 0.0 {
                    return 0.0;
                }
                let radius = inner_upper * at_zero;
                let f = |t: f64| {
                    let v: Vec<f64> = (0..3).map(|i| lifted[i] + t * frame.normal[i]).collect();
                    inner.dual_gauge(&v)
                };
                golden_min(f, -radius, radius, Tolerances::default().support_tol * radius)
                    .min(at_zero)
            }
        }
    }

    /// Subdifferential of the gauge at `p ≠ 0` with the default activity tolerance.
    pub fn subdifferential(&self, p: &[f64]) -> Result<SubgradientSet> {
        self.subdifferential_with(p, Tolerances::default().active_rel)
    }

    /// Subdifferential where faces within relative slack `rel` count as active.
    pub fn subdifferential_with(&self, p: &[f64], rel: f64) -> Result<SubgradientSet> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: p.len(),
            });
        }
        if p.iter().all(|c| *c == 0.0) {
            return Err(Error::Domain("subdifferential at origin not supported".into()));
        }
        let gens = self.generators(p, rel);
        let kind = if gens.len() == 1 {
            SubgradientKind::Smooth(gens.into_iter().next().unwrap())
        } else {
            SubgradientKind::Facial(gens)
        };
        Ok(SubgradientSet {
            kind,
            base_point: p.to_vec(),
        })
    }

    /// Extreme generators of ∂‖·‖(p); `p` must be nonzero.
    pub(crate) fn generators(&self, p: &[f64], rel: f64) -> Vec<Vec<f64>> {
        match &self.shape {
            Shape::Ellipsoid { matrix, .. } => {
                let ap = mat_vec(matrix, p);
                let value = dot(p, &ap).sqrt();
                vec![linalg::scale(&ap, 1.0 / value)]
            }
            Shape::LpBall { p: exp, scales } => lp_generators(p, scales, *exp, rel),
            Shape::HPolytope { hull, .. } | Shape::VPolytope { hull, .. } => hull.active(p, rel),
            Shape::LinearImage { inverse, inner, .. } => inner
                .generators(&mat_vec(inverse, p), rel)
                .iter()
                .map(|g| mat_t_vec(inverse, g))
                .collect(),
            Shape::Section { frame, inner, .. } => {
                let lifted = inner.generators(&frame.lift(p), rel);
                let projected: Vec<Vec<f64>> = lifted.iter().map(|g| frame.coords(g)).collect();
                extreme_on_line(p, projected)
            }
        }
    }

    /// Constants with `lower·‖x‖₂ ≤ ‖x‖_K ≤ upper·‖x‖₂`.
    pub fn norm_equivalence_constants(&self) -> NormBounds {
        *self.bounds.get_or_init(|| self.compute_bounds())
    }

    fn compute_bounds(&self) -> NormBounds {
        let closed = |lower: f64, upper: f64| NormBounds {
            lower,
            upper,
            samples: None,
        };
        match &self.shape {
            Shape::Ellipsoid { matrix, .. } => {
                let eig = matrix.clone().symmetric_eigen().eigenvalues;
                closed(eig.min().sqrt(), eig.max().sqrt())
            }
            Shape::LpBall { p, scales } if scales.iter().all(|s| *s == scales[0]) => {
                let n = self.dim as f64;
                let e = n.powf(1.0 / p - 0.5);
                let (lo, hi) = if *p >= 2.0 { (e, 1.0) } else { (1.0, e) };
                closed(lo / scales[0], hi / scales[0])
            }
            Shape::HPolytope { hull, .. } | Shape::VPolytope { hull, .. } => polytope_bounds(hull),
            Shape::LinearImage {
                map, inverse, inner, ..
            } => match &inner.shape {
                Shape::Ellipsoid { matrix, .. } => {
                    let pulled = inverse.transpose() * matrix * inverse;
                    let eig = ((&pulled + pulled.transpose()) * 0.5).symmetric_eigen().eigenvalues;
                    closed(eig.min().sqrt(), eig.max().sqrt())
                }
                Shape::HPolytope { hull, .. } | Shape::VPolytope { hull, .. } => {
                    polytope_bounds(&hull.map_linear(map, inverse))
                }
                _ => self.sampled_bounds(),
            },
            _ => self.sampled_bounds(),
        }
    }

    /// Certified constants from a sphere net of covering radius δ:
    /// `upper ≤ M/(1−δ)` and `lower ≥ m − upper·δ`.
    fn sampled_bounds(&self) -> NormBounds {
        let (dirs, delta) = sphere_net(self.dim);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for d in &dirs {
            let g = self.gauge(d);
            lo = lo.min(g);
            hi = hi.max(g);
        }
        let upper = hi / (1.0 - delta);
        // K sits in the box Π[−h(eᵢ), h(eᵢ)], so no point of K is farther
        // than √(Σ h(eᵢ)²) from the origin.
        let reach: f64 = (0..self.dim)
            .map(|i| {
                let mut e = vec![0.0; self.dim];
                e[i] = 1.0;
                self.dual_gauge(&e).powi(2)
            })
            .sum::<f64>()
            .sqrt();
        let lower = (lo - upper * delta).max(1.0 / reach);
        NormBounds {
            lower,
            upper,
            samples: Some(dirs.len()),
        }
    }

    /// `direction / ‖direction‖_K`, a point of ∂K.
    pub fn boundary_point(&self, direction: &[f64]) -> Result<Vec<f64>> {
        if direction.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: direction.len(),
            });
        }
        let g = self.gauge(direction);
        if !(g > 0.0) {
            return Err(Error::Domain("boundary_point needs a nonzero direction".into()));
        }
        Ok(linalg::scale(direction, 1.0 / g))
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::InvalidBody(format!("dimension must be 2 or 3, got {dim}")))
    }
}

fn quad_form(m: &DMatrix<f64>, x: &[f64]) -> f64 {
    dot(x, &mat_vec(m, x))
}

fn axis_of(v: &[f64]) -> Option<usize> {
    let idx = v.iter().position(|c| (c.abs() - 1.0).abs() <= 1e-12)?;
    v.iter()
        .enumerate()
        .all(|(i, c)| i == idx || c.abs() <= 1e-12)
        .then_some(idx)
}

fn lp_norm(x: &[f64], scales: &[f64], p: f64) -> f64 {
    let y: Vec<f64> = x.iter().zip(scales).map(|(xi, s)| xi / s).collect();
    let m = linalg::max_abs(&y);
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    if p == 1.0 {
        return y.iter().map(|v| v.abs()).sum();
    }
    if p == 2.0 {
        return y.iter().map(|v| v * v).sum::<f64>().sqrt();
    }
    m * y.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn lp_generators(x: &[f64], scales: &[f64], p: f64, rel: f64) -> Vec<Vec<f64>> {
    let y: Vec<f64> = x.iter().zip(scales).map(|(xi, s)| xi / s).collect();
    let m = linalg::max_abs(&y);
    if p == 1.0 {
        let mut gens: Vec<Vec<f64>> = vec![vec![0.0; x.len()]];
        for (i, yi) in y.iter().enumerate() {
            if yi.abs() <= rel * m {
                gens = gens
                    .into_iter()
                    .flat_map(|g| {
                        let mut lo = g.clone();
                        let mut hi = g;
                        lo[i] = -1.0 / scales[i];
                        hi[i] = 1.0 / scales[i];
                        [lo, hi]
                    })
                    .collect();
            } else {
                let s = yi.signum() / scales[i];
                gens.iter_mut().for_each(|g| g[i] = s);
            }
        }
        return gens;
    }
    let z: Vec<f64> = y.iter().map(|v| v / m).collect();
    let n = z.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p);
    let denom = n.powf(p - 1.0);
    vec![z
        .iter()
        .zip(scales)
        .map(|(zi, s)| zi.signum() * zi.abs().powf(p - 1.0) / (s * denom))
        .collect()]
}

/// Generators of a planar subdifferential lie on the line `⟨g, p⟩ = ‖p‖`;
/// keep the two extremes along it.
fn extreme_on_line(p: &[f64], gens: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    if gens.len() <= 1 {
        return gens;
    }
    let dir = [-p[1], p[0]];
    let key = |g: &Vec<f64>| dot(g, &dir);
    let lo = gens.iter().min_by(|a, b| key(a).total_cmp(&key(b))).unwrap();
    let hi = gens.iter().max_by(|a, b| key(a).total_cmp(&key(b))).unwrap();
    let spread = linalg::dist(lo, hi);
    let scale = norm(lo).max(norm(hi));
    if spread <= 1e-12 * scale {
        vec![lo.clone()]
    } else {
        vec![lo.clone(), hi.clone()]
    }
}

fn polytope_bounds(hull: &Polytope) -> NormBounds {
    let upper = hull.functionals.iter().map(|a| norm(a)).fold(0.0, f64::max);
    let reach = hull.vertices.iter().map(|v| norm(v)).fold(0.0, f64::max);
    NormBounds {
        lower: 1.0 / reach,
        upper,
        samples: None,
    }
}

/// Unit vectors with Euclidean covering radius `δ` on the sphere.
fn sphere_net(dim: usize) -> (Vec<Vec<f64>>, f64) {
    if dim == 2 {
        let n = 4096usize;
        let dirs = (0..n)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / n as f64;
                vec![a.cos(), a.sin()]
            })
            .collect();
        (dirs, std::f64::consts::PI / n as f64)
    } else {
        // Cell centres on each face of [-1,1]³, pushed radially to the sphere.
        // Radial projection from outside the ball is the metric projection, hence
        // 1-Lipschitz, so the face covering radius √2/k carries over.
        let k = 64usize;
        let h = 2.0 / k as f64;
        let mut dirs = Vec::with_capacity(6 * k * k);
        for axis in 0..3 {
            for sign in [-1.0, 1.0] {
                for i in 0..k {
                    for j in 0..k {
                        let a = -1.0 + (i as f64 + 0.5) * h;
                        let b = -1.0 + (j as f64 + 0.5) * h;
                        let mut v = vec![0.0; 3];
                        v[axis] = sign;
                        v[(axis + 1) % 3] = a;
                        v[(axis + 2) % 3] = b;
                        let n = norm(&v);
                        dirs.push(linalg::scale(&v, 1.0 / n));
                    }
                }
            }
        }
        (dirs, std::f64::consts::SQRT_2 / k as f64)
    }
}

/// Golden-section search for the minimum of a convex function on `[a, b]`.
pub(crate) fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = fc.min(fd);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
        best = best.min(fc).min(fd);
    }
    best
}

#[cfg(test)]
mod tests;
