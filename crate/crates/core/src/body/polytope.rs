//! Dual descriptions of centrally symmetric polytopes.
//!
//! Every symmetric polytope is kept with both its facet functionals
//! (`{x : |⟨a, x⟩| ≤ 1}`) and its vertices (`conv{±v}`), one representative
//! per `±` pair. The gauge is then `max |⟨a, x⟩|` and the support function is
//! `max |⟨v, g⟩|`, both exact.

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, rank, solve};
use nalgebra::DMatrix;

const FEAS_SLACK: f64 = 1e-9;
const DEDUP_REL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    pub functionals: Vec<Vec<f64>>,
    pub vertices: Vec<Vec<f64>>,
}

impl Polytope {
    /// Build from the functionals of `{x : |⟨aᵢ, x⟩| ≤ 1}`; redundant rows are dropped.
    pub fn from_functionals(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        if rows.iter().any(|a| a.len() != dim) {
            return Err(Error::InvalidBody("functional of wrong dimension".into()));
        }
        if rows.iter().any(|a| a.iter().any(|v| !v.is_finite()) || norm(a) == 0.0) {
            return Err(Error::InvalidBody("functionals must be finite and nonzero".into()));
        }
        if rank(rows, dim, 1e-12) < dim {
            return Err(Error::InvalidBody(
                "functionals do not span the space; the body is unbounded".into(),
            ));
        }
        let vertices = enumerate_vertices(dim, rows);
        let mut functionals: Vec<Vec<f64>> = Vec::new();
        for a in rows {
            let touching: Vec<Vec<f64>> = vertices
                .iter()
                .filter(|v| dot(a, v).abs() >= 1.0 - FEAS_SLACK)
                .cloned()
                .collect();
            if rank(&touching, dim, 1e-9) == dim {
                push_unique(&mut functionals, canonical(a));
            }
        }
        Ok(Self {
            functionals,
            vertices,
        })
    }

    /// Build from generators of `conv{±vᵢ}`.
    pub fn from_generators(dim: usize, generators: &[Vec<f64>]) -> Result<Self> {
        if generators.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidBody("generator of wrong dimension".into()));
        }
        if generators.iter().any(|v| v.iter().any(|c| !c.is_finite())) {
            return Err(Error::InvalidBody("generators must be finite".into()));
        }
        let nonzero: Vec<Vec<f64>> = generators.iter().filter(|v| norm(v) > 0.0).cloned().collect();
        if rank(&nonzero, dim, 1e-12) < dim {
            return Err(Error::InvalidBody(
                "generators do not span the space; the body has empty interior".into(),
            ));
        }
        // Facets of conv{±v} are the vertices of the polar {g : |⟨v, g⟩| ≤ 1}.
        let facets = enumerate_vertices(dim, &nonzero);
        Self::from_functionals(dim, &facets)
    }

    pub fn gauge(&self, x: &[f64]) -> f64 {
        self.functionals
            .iter()
            .fold(0.0, |m, a| m.max(dot(a, x).abs()))
    }

    pub fn support(&self, g: &[f64]) -> f64 {
        self.vertices.iter().fold(0.0, |m, v| m.max(dot(v, g).abs()))
    }

    /// Signed facet normals active at `x`, i.e. the extreme points of ∂‖·‖(x).
    pub fn active(&self, x: &[f64], rel: f64) -> Vec<Vec<f64>> {
        let value = self.gauge(x);
        self.functionals
            .iter()
            .filter_map(|a| {
                let s = dot(a, x);
                (s.abs() >= value * (1.0 - rel)).then(|| {
                    if s >= 0.0 {
                        a.clone()
                    } else {
                        a.iter().map(|c| -c).collect()
                    }
                })
            })
            .collect()
    }

    pub fn map_linear(&self, map: &DMatrix<f64>, inverse: &DMatrix<f64>) -> Self {
        // x ∈ TK  ⟺ T⁻¹x ∈ K, so functionals become aT⁻¹ and vertices Tv.
        let functionals = self
            .functionals
            .iter()
            .map(|a| crate::linalg::mat_t_vec(inverse, a))
            .collect();
        let vertices = self
            .vertices
            .iter()
            .map(|v| crate::linalg::mat_vec(map, v))
            .collect();
        Self {
            functionals,
            vertices,
        }
    }
}

fn canonical(v: &[f64]) -> Vec<f64> {
    let lead = v.iter().find(|c| c.abs() > 1e-300).copied().unwrap_or(1.0);
    if lead < 0.0 {
        v.iter().map(|c| -c).collect()
    } else {
        v.to_vec()
    }
}

fn push_unique(out: &mut Vec<Vec<f64>>, v: Vec<f64>) {
    let scale = norm(&v).max(1e-300);
    let dup = out.iter().any(|w| {
        let d: f64 = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        d <= DEDUP_REL * scale
    });
    if !dup {
        out.push(v);
    }
}

fn index_subsets(k: usize, dim: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    match dim {
        1 => (0..k).for_each(|i| out.push(vec![i])),
        2 => {
            for i in 0..k {
                for j in i + 1..k {
                    out.push(vec![i, j]);
                }
            }
        }
        3 => {
            for i in 0..k {
                for j in i + 1..k {
                    for l in j + 1..k {
                        out.push(vec![i, j, l]);
                    }
                }
            }
        }
        _ => unreachable!("dimensions above three are not supported"),
    }
    out
}

/// Vertices of `{x : |⟨aᵢ, x⟩| ≤ 1 ∀i}`, one per `±` pair.
fn enumerate_vertices(dim: usize, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for subset in index_subsets(rows.len(), dim) {
        let m = DMatrix::from_fn(dim, dim, |i, j| rows[subset[i]][j]);
        // Fix the first sign; the opposite pattern yields the antipodal vertex.
        for pattern in 0..(1usize << (dim - 1)) {
            let rhs: Vec<f64> = (0..dim)
                .map(|i| {
                    if i > 0 && pattern >> (i - 1) & 1 == 1 {
                        -1.0
                    } else {
                        1.0
                    }
                })
                .collect();
            let Some(x) = solve(&m, &rhs) else { continue };
            let feasible = rows.iter().all(|a| dot(a, &x).abs() <= 1.0 + FEAS_SLACK);
            if feasible {
                push_unique(&mut out, canonical(&x));
            }
        }
    }
    out
}
