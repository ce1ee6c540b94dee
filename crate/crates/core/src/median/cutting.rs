//! Ellipsoid-method minimization of a convex function over a convex region.
//!
//! Each objective cut at a feasible center `x` with subgradient `g` also yields
//! the lower bound `f(x) − √(gᵀPg)` on the minimum, because the current
//! ellipsoid always contains every minimizer. The method stops once the best
//! value and the best lower bound agree to the requested tolerance.

use crate::linalg::{self, dot, mat_t_vec, mat_vec};
use nalgebra::DMatrix;

#[derive(Debug, Clone)]
pub(crate) struct CutOutcome {
    pub x: Vec<f64>,
    pub lower_bound: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Answer of the feasibility oracle at an infeasible point: the region lies in
/// `{y : ⟨normal, y − x⟩ ≤ −depth}`.
pub(crate) struct Cut {
    pub normal: Vec<f64>,
    pub depth: f64,
}


pub(crate) fn minimize(
    center: Vec<f64>,
    radius: f64,
    candidates: &[(Vec<f64>, f64)],
    mut oracle: impl FnMut(&[f64]) -> (f64, Vec<f64>),
    mut feasibility: impl FnMut(&[f64]) -> Option<Cut>,
    tol: f64,
    max_iter: usize,
) -> CutOutcome {
    let n = center.len();
    let mut best_x = center.clone();
    let mut best = f64::INFINITY;
    for (x, v) in candidates {
        if *v < best {
            best = *v;
            best_x = x.clone();
        }
    }
    if n == 0 {
        let (v, _) = oracle(&center);
        return CutOutcome {
            x: center,
            lower_bound: v,
            iterations: 0,
            converged: true,
        };
    }
    if n == 1 {
        return interval(center[0], radius, best_x, best, oracle, feasibility, tol, max_iter);
    }

    let nf = n as f64;
    let origin = center.clone();
    let mut x = center;
    // P = J·Jᵀ. Updating the factor keeps thin axes accurate far longer than
    // updating P itself.
    let mut j = DMatrix::<f64>::identity(n, n) * radius;
    let mut lower = f64::NEG_INFINITY;

    for it in 0..max_iter {
        cap_axes(&mut j, &mut x, &origin, radius);
        let (a, beta, objective) = match feasibility(&x) {
            Some(cut) => (cut.normal, cut.depth.max(0.0), false),
            None => {
                let (v, g) = oracle(&x);
                if v < best {
                    best = v;
                    best_x = x.clone();
                }
                if g.iter().all(|c| *c == 0.0) {
                    return CutOutcome {
                        x: best_x,
                        lower_bound: v,
                        iterations: it,
                        converged: best - v <= tol,
                    };
                }
                let s = linalg::norm(&mat_t_vec(&j, &g));
                lower = lower.max(v - s);
                (g, v - best, true)
            }
        };
        if best - lower <= tol {
            return CutOutcome {
                x: best_x,
                lower_bound: lower,
                iterations: it,
                converged: true,
            };
        }
        let jt_a = mat_t_vec(&j, &a);
        let s = linalg::norm(&jt_a);
        if !(s > 0.0) || !s.is_finite() {
            return CutOutcome {
                x: best_x,
                lower_bound: lower,
                iterations: it,
                converged: best - lower <= tol,
            };
        }
        let alpha = beta / s;
        if alpha <= -1.0 / nf + 1e-9 {
            // Shallower than any ellipsoid update can use.
            return CutOutcome {
                x: best_x,
                lower_bound: lower,
                iterations: it,
                converged: best - lower <= tol,
            };
        }
        if alpha >= 1.0 {
            if objective {
                // Nothing left in the ellipsoid beats the incumbent.
                lower = lower.max(best);
                return CutOutcome {
                    x: best_x,
                    lower_bound: lower,
                    iterations: it,
                    converged: best - lower <= tol,
                };
            }
            // The ellipsoid misses the region: only rounding can get here.
            return CutOutcome {
                x: best_x,
                lower_bound: lower,
                iterations: it,
                converged: best - lower <= tol,
            };
        }
        update(&mut j, &mut x, &jt_a, s, alpha, nf);
    }
    CutOutcome {
        x: best_x,
        lower_bound: lower,
        iterations: max_iter,
        converged: best - lower <= tol,
    }
}

/// Cut `{y : ⟨a, y − x⟩ ≤ −α·√(aᵀPa)}` given `Jᵀa` and its norm `s`.
fn update(j: &mut DMatrix<f64>, x: &mut [f64], jt_a: &[f64], s: f64, alpha: f64, nf: f64) {
    let n = x.len();
    let v: Vec<f64> = jt_a.iter().map(|c| c / s).collect();
    let b = mat_vec(j, &v);
    let step = (1.0 + nf * alpha) / (nf + 1.0);
    for i in 0..n {
        x[i] -= step * b[i];
    }
    let shrink = (nf * nf / (nf * nf - 1.0) * (1.0 - alpha * alpha)).sqrt();
    let sigma = 2.0 * (1.0 + nf * alpha) / ((nf + 1.0) * (1.0 + alpha));
    let gamma = 1.0 - (1.0 - sigma).max(0.0).sqrt();
    for r in 0..n {
        for c in 0..n {
            j[(r, c)] = shrink * (j[(r, c)] - gamma * b[r] * v[c]);
        }
    }
}

/// Every minimizer lies in the initial ball, so an axis longer than `n·R`
/// can be trimmed with a shallow cut along a supporting halfspace of that ball.
fn cap_axes(j: &mut DMatrix<f64>, x: &mut [f64], origin: &[f64], radius: f64) {
    let n = x.len();
    let nf = n as f64;
    if j.norm() <= nf * radius {
        return;
    }
    for _ in 0..4 {
        let svd = j.clone().svd(true, false);
        let (k, top) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, 0.0), |m, (i, s)| if *s > m.1 { (i, *s) } else { m });
        if top <= nf * radius {
            return;
        }
        let e: Vec<f64> = svd.u.as_ref().unwrap().column(k).iter().copied().collect();
        let offset = dot(&e, &linalg::sub(x, origin));
        let mut cut = false;
        for sign in [1.0, -1.0] {
            let a: Vec<f64> = e.iter().map(|c| sign * c).collect();
            // Ball: ⟨a, y − origin⟩ ≤ R  ⟺  ⟨a, y − x⟩ ≤ R − sign·offset.
            let beta = sign * offset - radius;
            let jt_a = mat_t_vec(j, &a);
            let s = linalg::norm(&jt_a);
            let alpha = beta / s;
            if alpha > -1.0 / nf + 1e-3 {
                update(j, x, &jt_a, s, alpha, nf);
                cut = true;
                break;
            }
        }
        if !cut {
            return;
        }
    }
}

/// One-dimensional specialization: bisection on `[c − r, c + r]` with the same
/// lower-bound bookkeeping.
#[allow(clippy::too_many_arguments)]
fn interval(
    center: f64,
    radius: f64,
    mut best_x: Vec<f64>,
    mut best: f64,
    mut oracle: impl FnMut(&[f64]) -> (f64, Vec<f64>),
    mut feasibility: impl FnMut(&[f64]) -> Option<Cut>,
    tol: f64,
    max_iter: usize,
) -> CutOutcome {
    let (mut lo, mut hi) = (center - radius, center + radius);
    // Latest tangent lines bounding the minimizer from each side, as (x, v, g).
    let mut left: Option<(f64, f64, f64)> = None;
    let mut right: Option<(f64, f64, f64)> = None;
    let mut lower = f64::NEG_INFINITY;
    for it in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        let x = [mid];
        match feasibility(&x) {
            Some(cut) => {
                if cut.normal[0] > 0.0 {
                    hi = mid - cut.depth.max(0.0) / cut.normal[0];
                } else {
                    lo = mid + cut.depth.max(0.0) / (-cut.normal[0]);
                }
            }
            None => {
                let (v, g) = oracle(&x);
                if v < best {
                    best = v;
                    best_x = x.to_vec();
                }
                if g[0] == 0.0 {
                    lower = lower.max(v);
                } else if g[0] > 0.0 {
                    hi = mid;
                    right = Some((mid, v, g[0]));
                } else {
                    lo = mid;
                    left = Some((mid, v, g[0]));
                }
            }
        }
        lower = lower.max(tangent_bound(left, right, lo, hi));
        if best - lower <= tol {
            return CutOutcome {
                x: best_x,
                lower_bound: lower,
                iterations: it,
                converged: true,
            };
        }
        if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1e-300) {
            return CutOutcome {
                x: best_x,
                lower_bound: lower,
                iterations: it,
                converged: false,
            };
        }
    }
    CutOutcome {
        x: best_x,
        lower_bound: lower,
        iterations: max_iter,
        converged: best - lower <= tol,
    }
}

/// Minimum over `[lo, hi]` of the pointwise max of the known tangent lines.
fn tangent_bound(
    left: Option<(f64, f64, f64)>,
    right: Option<(f64, f64, f64)>,
    lo: f64,
    hi: f64,
) -> f64 {
    let line = |(x, v, g): (f64, f64, f64), y: f64| v + g * (y - x);
    match (left, right) {
        (None, None) => f64::NEG_INFINITY,
        (Some(l), None) => line(l, hi),
        (None, Some(r)) => line(r, lo),
        (Some(l), Some(r)) => {
            let y = ((r.1 - r.2 * r.0) - (l.1 - l.2 * l.0)) / (l.2 - r.2);
            let y = y.clamp(lo, hi);
            line(l, y).max(line(r, y))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_shifted_abs_sum() {
        // f(x, y) = |x − 1| + 2|y + 0.5|, minimum 0 at (1, −0.5).
        let out = minimize(
            vec![0.0, 0.0],
            10.0,
            &[],
            |x| {
                let v = (x[0] - 1.0).abs() + 2.0 * (x[1] + 0.5).abs();
                let g = vec![(x[0] - 1.0).signum(), 2.0 * (x[1] + 0.5).signum()];
                (v, g)
            },
            |_| None,
            1e-12,
            10_000,
        );
        assert!(out.converged);
        let v = (out.x[0] - 1.0).abs() + 2.0 * (out.x[1] + 0.5).abs();
        assert!(v < 1e-11);
        assert!(out.lower_bound <= v);
    }

    #[test]
    fn respects_halfplane_constraint() {
        // minimize x² + y² subject to x ≥ 1.
        let out = minimize(
            vec![2.0, 0.0],
            5.0,
            &[],
            |x| (x[0] * x[0] + x[1] * x[1], vec![2.0 * x[0], 2.0 * x[1]]),
            |x| {
                (x[0] < 1.0).then(|| Cut {
                    normal: vec![-1.0, 0.0],
                    depth: 1.0 - x[0],
                })
            },
            1e-10,
            10_000,
        );
        assert!(out.converged);
        let v = out.x[0] * out.x[0] + out.x[1] * out.x[1];
        assert!((v - 1.0).abs() < 1e-9);
        assert!(out.lower_bound <= 1.0 + 1e-12);
    }

    #[test]
    fn interval_case() {
        let out = minimize(
            vec![0.0],
            4.0,
            &[],
            |x| ((x[0] - 0.3).abs(), vec![(x[0] - 0.3).signum()]),
            |_| None,
            1e-13,
            1000,
        );
        assert!(out.converged);
        assert!((out.x[0] - 0.3).abs() < 1e-12);
    }
}
