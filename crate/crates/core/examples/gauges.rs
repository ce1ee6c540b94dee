//! Gauges, support functions and subdifferentials of a few bodies.

use intuitive_norms::{Body, SectionFrame};

fn main() -> intuitive_norms::Result<()> {
    let l1 = Body::lp_ball(3, 1.0)?;
    let ellipse = Body::ellipsoid_axes(&[1.0, 2.0, 3.0])?;
    let cube = Body::cube(3)?;
    let x = [1.0, -2.0, 0.5];

    for (name, body) in [("l1", &l1), ("ellipsoid", &ellipse), ("cube", &cube)] {
        let b = body.norm_equivalence_constants();
        println!(
            "{name:>9}: |x| = {:.4}, h(x) = {:.4}, {:.4}|x|_2 <= |x| <= {:.4}|x|_2",
            body.gauge(&x),
            body.dual_gauge(&x),
            b.lower,
            b.upper
        );
    }

    // On an axis the l1 gauge has a kink: the subdifferential is a face of the dual cube.
    let face = l1.subdifferential(&[2.0, 0.0, 0.0])?;
    println!("subgradients of l1 at (2,0,0): {:?}", face.generators());

    let frame = SectionFrame::from_normal(&[1.0, 1.0, 1.0])?;
    let slice = ellipse.section(&frame)?;
    println!("section of the ellipsoid orthogonal to (1,1,1) has kind {} and dimension {}", slice.kind(), slice.dim());

    let sheared = l1.apply_linear(vec![vec![1.0, 0.5, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 2.0]])?;
    println!("gauge of the sheared cross-polytope at x: {:.4}", sheared.gauge(&x));
    println!("as JSON: {}", serde_json::to_string(&sheared).expect("bodies serialize"));
    Ok(())
}
