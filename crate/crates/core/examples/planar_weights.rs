//! Weights that make the origin a median for three boundary points of a planar body.

use intuitive_norms::intuition::construct_median_weights;
use intuitive_norms::median::{objective, solve_unconstrained};
use intuitive_norms::Body;

fn main() -> intuitive_norms::Result<()> {
    let body = Body::h_polytope(vec![vec![1.0, 0.2], vec![-0.3, 1.0], vec![0.6, 0.8]])?;
    let [x, y, z] = [[1.0, 0.3], [-0.2, 1.0], [-0.7, -0.6]].map(|d| body.boundary_point(&d).unwrap());
    let wp = construct_median_weights(&body, &x, &y, &z)?;
    for (p, w) in wp.points().iter().zip(wp.weights()) {
        println!("W({:+.4}, {:+.4}) = {:.6}", p[0], p[1], w);
    }
    let best = solve_unconstrained(&body, &wp)?;
    println!("F(0) = {:.12}, min F = {:.12}", objective(&body, &wp, &[0.0, 0.0]), best.value);
    Ok(())
}
