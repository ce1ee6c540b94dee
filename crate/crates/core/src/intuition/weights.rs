//! Planar weights that put a median at the origin.
//!
//! Given boundary points `x`, `y`, `z` of a planar body and subgradients
//! `g_x`, `g_y` spanning the plane, write `g_z = a_x·g_x + a_y·g_y`. Because
//! `∂‖·‖(−p) = −∂‖·‖(p)`, a positive coefficient is realized by weight on `−p`
//! and a negative one by weight on `p`, so `Σ W(q)·g_q = 0` and `0 ∈ ∂F(0)`.

use crate::body::{Body, SubgradientSet};
use crate::error::{Error, Result};
use crate::linalg;
use crate::median::WeightedPoints;
use serde::{Deserialize, Serialize};

/// Which element of `∂‖·‖(p)` to use when `p` sits on a kink.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorChoice {
    /// Lexicographically smallest extreme generator.
    #[default]
    Smallest,
    /// Extreme generator by index, in the order the body reports them.
    Index(usize),
    /// Mean of the extreme generators.
    Average,
    /// An explicit subgradient; rejected unless it lies in the set.
    Given(Vec<f64>),
}

impl GeneratorChoice {
    fn pick(&self, set: &SubgradientSet) -> Result<Vec<f64>> {
        match self {
            GeneratorChoice::Smallest => Ok(set.first()),
            GeneratorChoice::Average => Ok(set.average()),
            GeneratorChoice::Index(i) => set.generators().get(*i).cloned().ok_or_else(|| {
                Error::InvalidInput(format!(
                    "generator index {i} out of range ({} available)",
                    set.generators().len()
                ))
            }),
            GeneratorChoice::Given(g) => {
                if set.contains(g, 1e-9) {
                    Ok(g.clone())
                } else {
                    Err(Error::InvalidInput(format!("{g:?} is not a subgradient at {:?}", set.base_point)))
                }
            }
        }
    }
}

/// Weights on `{z, ±x, ±y}` with `W(z) > 0` and the origin a median, using
/// the default generator choice everywhere.
pub fn construct_median_weights(body: &Body, x: &[f64], y: &[f64], z: &[f64]) -> Result<WeightedPoints> {
    let d = GeneratorChoice::default();
    construct_median_weights_with(body, [x, y, z], [&d, &d, &d]).map(|(wp, _)| wp)
}

/// Full form: explicit generator choices for `x`, `y`, `z`; also returns the
/// subgradient used at each output point, in output order.
pub fn construct_median_weights_with(
    body: &Body,
    points: [&[f64]; 3],
    choice: [&GeneratorChoice; 3],
) -> Result<(WeightedPoints, Vec<Vec<f64>>)> {
    if body.dim() != 2 {
        return Err(Error::InvalidInput(format!("planar body required, got dimension {}", body.dim())));
    }
    for (name, p) in ["x", "y", "z"].iter().zip(points) {
        if p.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: p.len(),
            });
        }
        let g = body.gauge(p);
        if (g - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("{name} must lie on the boundary, gauge is {g}")));
        }
    }
    let [x, y, z] = points;
    let gx = choice[0].pick(&body.subdifferential(x)?)?;
    let gy = choice[1].pick(&body.subdifferential(y)?)?;
    let gz = choice[2].pick(&body.subdifferential(z)?)?;
    let det = gx[0] * gy[1] - gx[1] * gy[0];
    if det.abs() <= 1e-9 {
        return Err(Error::Domain(format!(
            "generators at x and y are dependent (determinant {det:e})"
        )));
    }
    // Cramer's rule for g_z = a_x·g_x + a_y·g_y.
    let ax = (gz[0] * gy[1] - gz[1] * gy[0]) / det;
    let ay = (gx[0] * gz[1] - gx[1] * gz[0]) / det;

    let mut pts = vec![z.to_vec()];
    let mut raw = vec![1.0];
    let mut grads = vec![gz];
    for (a, p, g) in [(ax, x, gx), (ay, y, gy)] {
        if a > 0.0 {
            pts.push(linalg::scale(p, -1.0));
            raw.push(a);
            grads.push(linalg::scale(&g, -1.0));
        } else if a < 0.0 {
            pts.push(p.to_vec());
            raw.push(-a);
            grads.push(g);
        }
    }
    Ok((WeightedPoints::normalized(pts, raw)?, grads))
}
