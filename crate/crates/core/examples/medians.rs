//! Medians over the whole space, the convex hull and the affine span.

use intuitive_norms::median::{self, weiszfeld, Region, WeightedPoints};
use intuitive_norms::Body;

fn main() -> intuitive_norms::Result<()> {
    // Two points under the l1 norm: every point of the unit square is a median.
    let l1 = Body::lp_ball(2, 1.0)?;
    let wp = WeightedPoints::uniform(vec![vec![0.0, 1.0], vec![1.0, 0.0]])?;
    for xi in [[0.0, 0.0], [0.5, 0.5], [0.2, 0.9]] {
        println!("F{xi:?} = {}", median::objective(&l1, &wp, &xi));
    }

    let ball = Body::euclidean_ball(3)?;
    let wp = WeightedPoints::new(
        vec![vec![0.0, 0.0, 0.0], vec![2.0, 0.0, 0.0], vec![0.0, 3.0, 0.0], vec![1.0, 1.0, 2.0]],
        vec![0.1, 0.2, 0.3, 0.4],
    )?;
    let r = median::solve_unconstrained(&ball, &wp)?;
    println!(
        "euclidean median {:?}: value {:.10}, certified lower bound {:.10}",
        r.minimizer, r.value, r.lower_bound
    );
    println!("Weiszfeld agrees: {:.10}", weiszfeld(&wp)?.value);

    let l4 = Body::lp_ball(3, 4.0)?;
    let free = median::solve_unconstrained(&l4, &wp)?;
    let hull = median::solve_constrained(&l4, &wp, &Region::Hull)?;
    let span = median::solve_constrained(&l4, &wp, &Region::AffineSpan)?;
    println!("l4: free {:.10}, hull {:.10}, affine span {:.10}", free.value, hull.value, span.value);
    Ok(())
}
