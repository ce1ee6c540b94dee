//! Executable forms of the hull property: checks for single instances,
//! randomized witness search in three dimensions, and the planar weight
//! constructor that makes the origin a median.
//!
//! A violation is only ever reported with a certificate: the objective at the
//! escaped point must sit strictly below a certified lower bound over the
//! region, so solver error cannot produce a false witness.

mod weights;
mod search;

pub use weights::{construct_median_weights, construct_median_weights_with, GeneratorChoice};
pub use search::{probe, search_witness, trial_instance, ProbeSummary, SearchConfig, SearchOutcome};

use crate::body::Body;
use crate::error::{Error, Result};
use crate::geometry::{self, Separator};
use crate::linalg;
use crate::median::{
    self, certified_lower_bound_adaptive, objective, plane_patch, BoundRegion, MedianResult, Region,
    WeightedPoints,
};
use serde::{Deserialize, Serialize};

/// Cell budget for the branch-and-bound certificate.
pub const CERTIFY_CELLS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    IntuitiveAtTol,
    Violated,
}

/// Which set the median is asked to meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessRegion {
    #[default]
    Hull,
    AffineSpan,
}

impl WitnessRegion {
    fn solver_region(self) -> Region {
        match self {
            WitnessRegion::Hull => Region::Hull,
            WitnessRegion::AffineSpan => Region::AffineSpan,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub verdict: Verdict,
    /// Constrained minus unconstrained solver value.
    pub gap: f64,
    pub certificate: Option<Witness>,
    /// Set when the solver gap exceeded the tolerance but could not be certified.
    pub flag: Option<String>,
}

/// Where a witness came from, enough to rerun the search that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub trial: u64,
    /// Accepted hill-climbing moves between the sampled and the stored instance.
    pub refine_trace: usize,
}

/// Parameters of the branch-and-bound run behind `lower_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub target: f64,
    pub max_cells: usize,
    pub cells: usize,
}

/// A certified instance whose median misses the region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    pub body: Body,
    pub wp: WeightedPoints,
    pub escaped: Vec<f64>,
    /// `F(escaped)`.
    pub value: f64,
    /// Certified lower bound on `F` over `bound_region`.
    pub lower_bound: f64,
    /// `lower_bound − value`, strictly positive.
    pub gap: f64,
    pub separator: Separator,
    pub region: WitnessRegion,
    pub bound_region: BoundRegion,
    pub certification: Certification,
    pub provenance: Option<Provenance>,
}

impl Witness {
    /// Tries to certify that `escaped` beats every point of `region`.
    ///
    /// `target` is the bound the branch-and-bound aims for; anything strictly
    /// above `F(escaped)` suffices, and aiming a little higher keeps the margin
    /// visible. Returns `None` when the bound or the separator fails.
    pub fn certify(
        body: &Body,
        wp: &WeightedPoints,
        escaped: &[f64],
        region: WitnessRegion,
        target: f64,
        max_cells: usize,
    ) -> Result<Option<Witness>> {
        let value = objective(body, wp, escaped);
        let Some((separator, bound_region)) = separate(body, wp, escaped, region)? else {
            return Ok(None);
        };
        let bound = certified_lower_bound_adaptive(body, wp, &bound_region, target, max_cells)?;
        if !(bound.bound > value + 1e-12) {
            return Ok(None);
        }
        Ok(Some(Witness {
            body: body.clone(),
            wp: wp.clone(),
            escaped: escaped.to_vec(),
            value,
            lower_bound: bound.bound,
            gap: bound.bound - value,
            separator,
            region,
            bound_region,
            certification: Certification {
                target,
                max_cells,
                cells: bound.cells,
            },
            provenance: None,
        }))
    }

    /// Recomputes the bound and the separator from the stored fields and
    /// returns the certified gap.
    pub fn recertify(&self) -> Result<f64> {
        let value = objective(&self.body, &self.wp, &self.escaped);
        let Some((separator, bound_region)) = separate(&self.body, &self.wp, &self.escaped, self.region)?
        else {
            return Err(Error::Inconclusive("escaped point does not leave the region".into()));
        };
        if bound_region != self.bound_region {
            return Err(Error::Inconclusive("stored bound region does not match the instance".into()));
        }
        for p in self.wp.points() {
            let reach = linalg::dot(&self.separator.normal, &linalg::sub(p, &self.separator.nearest));
            if reach > 1e-9 {
                return Err(Error::Inconclusive("stored separator does not separate".into()));
            }
        }
        if (separator.margin - self.separator.margin).abs() > 1e-9 * separator.margin.max(1.0) {
            return Err(Error::Inconclusive("stored margin does not match".into()));
        }
        let bound = certified_lower_bound_adaptive(
            &self.body,
            &self.wp,
            &self.bound_region,
            self.certification.target,
            self.certification.max_cells,
        )?;
        if value + 1e-12 < bound.bound {
            Ok(bound.bound - value)
        } else {
            Err(Error::Inconclusive(format!(
                "bound {} does not exceed F(escaped) = {}",
                bound.bound, value
            )))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witness serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Separator of `x` from the region and the bounded set to certify over.
fn separate(
    body: &Body,
    wp: &WeightedPoints,
    x: &[f64],
    region: WitnessRegion,
) -> Result<Option<(Separator, BoundRegion)>> {
    let scale = wp.points().iter().map(|p| linalg::norm(p)).fold(1.0, f64::max);
    match region {
        WitnessRegion::Hull => {
            let proj = geometry::project_to_hull(x, wp.points())?;
            if proj.distance <= 1e-12 * scale {
                return Ok(None);
            }
            Ok(Some((geometry::separating_hyperplane(x, wp.points())?, BoundRegion::Hull)))
        }
        WitnessRegion::AffineSpan => {
            let span = geometry::affine_span(wp.points())?;
            if span.dim >= body.dim() {
                return Ok(None);
            }
            let nearest = span.lift(&span.coords(x));
            let margin = linalg::dist(x, &nearest);
            if margin <= 1e-12 * scale {
                return Ok(None);
            }
            let normal = linalg::scale(&linalg::sub(x, &nearest), 1.0 / margin);
            let patch = plane_patch(body, wp, &span.base, &span.basis);
            Ok(Some((
                Separator {
                    normal,
                    margin,
                    nearest,
                },
                patch,
            )))
        }
    }
}

fn converged(r: &MedianResult, what: &str) -> Result<()> {
    if r.is_converged() {
        Ok(())
    } else {
        Err(Error::Inconclusive(format!(
            "{what} solve ended with status {:?} (value {}, lower bound {})",
            r.status, r.value, r.lower_bound
        )))
    }
}

/// Decides whether some median of `wp` lies in `conv(P)`, up to `tol`.
pub fn check_intuitive(body: &Body, wp: &WeightedPoints, tol: f64) -> Result<CheckOutcome> {
    check(body, wp, tol, WitnessRegion::Hull)
}

/// Same as [`check_intuitive`] for the affine span of `P`.
pub fn check_affine(body: &Body, wp: &WeightedPoints, tol: f64) -> Result<CheckOutcome> {
    let span = geometry::affine_span(wp.points())?;
    if span.dim >= body.dim() {
        return Ok(CheckOutcome {
            verdict: Verdict::IntuitiveAtTol,
            gap: 0.0,
            certificate: None,
            flag: None,
        });
    }
    check(body, wp, tol, WitnessRegion::AffineSpan)
}

fn check(body: &Body, wp: &WeightedPoints, tol: f64, region: WitnessRegion) -> Result<CheckOutcome> {
    let free = median::solve_unconstrained(body, wp)?;
    converged(&free, "unconstrained")?;
    let held = median::solve_constrained(body, wp, &region.solver_region())?;
    converged(&held, "constrained")?;
    let gap = held.value - free.value;
    if gap <= tol {
        return Ok(CheckOutcome {
            verdict: Verdict::IntuitiveAtTol,
            gap,
            certificate: None,
            flag: None,
        });
    }
    let target = free.value + 0.5 * gap;
    match Witness::certify(body, wp, &free.minimizer, region, target, CERTIFY_CELLS)? {
        Some(w) => Ok(CheckOutcome {
            verdict: Verdict::Violated,
            gap,
            certificate: Some(w),
            flag: None,
        }),
        None => Ok(CheckOutcome {
            verdict: Verdict::IntuitiveAtTol,
            gap,
            certificate: None,
            flag: Some(format!("solver gap {gap:e} above tolerance but not certified")),
        }),
    }
}

#[cfg(test)]
mod tests;
