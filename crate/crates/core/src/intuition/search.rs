//! Randomized witness search.
//!
//! Trial `t` draws its instance from a ChaCha stream selected by `t`, so a
//! trial is reproducible on its own and results do not depend on how rayon
//! schedules the work.

use super::{Provenance, Witness, WitnessRegion, CERTIFY_CELLS};
use crate::body::Body;
use crate::error::{Error, Result};
use crate::linalg;
use crate::median::{self, WeightedPoints};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub n_points: usize,
    pub trials: usize,
    pub seed: u64,
    pub region: WitnessRegion,
    /// Hill-climbing passes per finalist.
    pub refine_steps: usize,
    /// How many of the best trials are refined and offered for certification.
    pub finalists: usize,
    /// Probability of pushing one weight close to zero.
    pub boundary_bias: f64,
    pub max_cells: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            n_points: 3,
            trials: 2_000,
            seed: 0,
            region: WitnessRegion::Hull,
            refine_steps: 30,
            finalists: 3,
            boundary_bias: 0.1,
            max_cells: CERTIFY_CELLS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub witness: Option<Witness>,
    /// Largest uncertified gap over the sampled trials, before refinement.
    pub best_gap: f64,
    pub best_trial: Option<u64>,
    /// Largest gap after refinement.
    pub refined_gap: f64,
    /// Trials whose two solves both converged.
    pub scored: usize,
    pub trials: usize,
}

/// Uniform point of the Euclidean unit ball.
fn ball_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = linalg::norm(&v);
        if n > 1e-12 {
            let r = rng.random::<f64>().powf(1.0 / dim as f64);
            return linalg::scale(&v, r / n);
        }
    }
}

/// The instance sampled by trial `trial`: points from the unit ball (on a
/// random plane through a random base for the affine region with more than
/// three points) and Dirichlet(1) weights, one of them occasionally pushed
/// towards zero.
pub fn trial_instance(cfg: &SearchConfig, dim: usize, trial: u64) -> Result<WeightedPoints> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial);
    let n = cfg.n_points.max(1);
    let points: Vec<Vec<f64>> = if cfg.region == WitnessRegion::AffineSpan && n > dim && dim == 3 {
        let base = ball_point(&mut rng, 3);
        let (v1, v2) = linalg::complete_basis(&ball_point(&mut rng, 3));
        (0..n)
            .map(|_| {
                let st = ball_point(&mut rng, 2);
                let mut p = base.clone();
                linalg::axpy(&mut p, st[0], &v1);
                linalg::axpy(&mut p, st[1], &v2);
                p
            })
            .collect()
    } else {
        (0..n).map(|_| ball_point(&mut rng, dim)).collect()
    };
    let mut weights: Vec<f64> = (0..n).map(|_| Exp1.sample(&mut rng)).collect();
    if n > 1 && rng.random::<f64>() < cfg.boundary_bias {
        let i = rng.random_range(0..n);
        weights[i] *= 1e-3;
    }
    WeightedPoints::normalized(points, weights)
}

/// Constrained minus unconstrained value, or `None` if either solve failed.
fn score(body: &Body, wp: &WeightedPoints, region: WitnessRegion) -> Option<f64> {
    let free = median::solve_unconstrained(body, wp).ok()?;
    let held = median::solve_constrained(body, wp, &region.solver_region()).ok()?;
    (free.is_converged() && held.is_converged()).then_some(held.value - free.value)
}

/// Coordinate-wise hill climbing on points and weights; returns the refined
/// instance, its score and the number of accepted moves.
fn refine(body: &Body, start: WeightedPoints, base: f64, cfg: &SearchConfig) -> (WeightedPoints, f64, usize) {
    let mut wp = start;
    let mut best = base;
    let mut accepted = 0;
    let mut step = 0.05;
    let coplanar = cfg.region == WitnessRegion::AffineSpan && wp.len() > body.dim();
    for _ in 0..cfg.refine_steps {
        let mut improved = false;
        let moves = wp.len() * body.dim() + wp.len();
        for k in 0..moves {
            for sign in [1.0, -1.0] {
                let Some(next) = perturb(&wp, k, sign * step, coplanar) else {
                    continue;
                };
                if let Some(s) = score(body, &next, cfg.region) {
                    if s > best {
                        best = s;
                        wp = next;
                        accepted += 1;
                        improved = true;
                        break;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-6 {
                break;
            }
        }
    }
    (wp, best, accepted)
}

/// Move number `k`: a point coordinate for `k < m·dim`, else a weight.
fn perturb(wp: &WeightedPoints, k: usize, delta: f64, coplanar: bool) -> Option<WeightedPoints> {
    let dim = wp.dim();
    let mut points = wp.points().to_vec();
    let mut weights = wp.weights().to_vec();
    if k < points.len() * dim {
        if coplanar {
            // Moving one point off the plane would leave the affine family.
            return None;
        }
        points[k / dim][k % dim] += delta;
    } else {
        let i = k - points.len() * dim;
        weights[i] = (weights[i] + delta).max(0.0);
    }
    WeightedPoints::normalized(points, weights).ok()
}

/// Samples `cfg.trials` instances, refines the best few and returns the first
/// one that certifies.
pub fn search_witness(body: &Body, cfg: &SearchConfig) -> Result<SearchOutcome> {
    if body.dim() != 3 {
        return Err(Error::InvalidInput(format!(
            "witness search runs in dimension 3, got {}",
            body.dim()
        )));
    }
    let scored: Vec<(u64, f64, WeightedPoints)> = (0..cfg.trials as u64)
        .into_par_iter()
        .filter_map(|t| {
            let wp = trial_instance(cfg, 3, t).ok()?;
            let s = score(body, &wp, cfg.region)?;
            Some((t, s, wp))
        })
        .collect();
    let mut ranked: Vec<&(u64, f64, WeightedPoints)> = scored.iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let best_gap = ranked.first().map_or(f64::NEG_INFINITY, |r| r.1);
    let best_trial = ranked.first().map(|r| r.0);

    let finalists: Vec<(u64, WeightedPoints, f64, usize)> = ranked
        .iter()
        .take(cfg.finalists)
        .filter(|r| r.1 > 1e-9)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(t, s, wp)| {
            let (wp, s, trace) = refine(body, wp.clone(), *s, cfg);
            (*t, wp, s, trace)
        })
        .collect();
    let refined_gap = finalists.iter().map(|f| f.2).fold(best_gap, f64::max);

    let mut order: Vec<&(u64, WeightedPoints, f64, usize)> = finalists.iter().collect();
    order.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)));
    let mut witness = None;
    for (trial, wp, gap, trace) in order {
        let free = median::solve_unconstrained(body, wp)?;
        let target = free.value + 0.5 * gap;
        if let Some(mut w) = Witness::certify(body, wp, &free.minimizer, cfg.region, target, cfg.max_cells)? {
            w.provenance = Some(Provenance {
                seed: cfg.seed,
                trial: *trial,
                refine_trace: *trace,
            });
            witness = Some(w);
            break;
        }
    }
    Ok(SearchOutcome {
        witness,
        best_gap,
        best_trial,
        refined_gap,
        scored: scored.len(),
        trials: cfg.trials,
    })
}

/// Outcome of [`probe`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSummary {
    pub instances: usize,
    pub max_gap: f64,
    /// Instances whose check came back violated (with a certificate).
    pub violations: usize,
    /// Instances whose solves did not converge.
    pub inconclusive: usize,
}

/// Runs [`super::check_intuitive`] on `trials` sampled instances of any
/// dimension; the planar null test expects zero violations.
pub fn probe(body: &Body, n_points: usize, trials: usize, seed: u64, tol: f64) -> Result<ProbeSummary> {
    let cfg = SearchConfig {
        n_points,
        seed,
        ..SearchConfig::default()
    };
    let results: Vec<Option<(f64, bool)>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let wp = trial_instance(&cfg, body.dim(), t).ok()?;
            let out = super::check_intuitive(body, &wp, tol).ok()?;
            Some((out.gap, out.verdict == super::Verdict::Violated))
        })
        .collect();
    let mut summary = ProbeSummary {
        instances: trials,
        max_gap: f64::NEG_INFINITY,
        violations: 0,
        inconclusive: 0,
    };
    for r in results {
        match r {
            Some((gap, violated)) => {
                summary.max_gap = summary.max_gap.max(gap);
                summary.violations += violated as usize;
            }
            None => summary.inconclusive += 1,
        }
    }
    Ok(summary)
}
