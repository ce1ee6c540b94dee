//! Does some median lie in the convex hull of the data?

use intuitive_norms::intuition::{check_affine, check_intuitive};
use intuitive_norms::median::WeightedPoints;
use intuitive_norms::Body;

fn main() -> intuitive_norms::Result<()> {
    let wp = WeightedPoints::uniform(vec![
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0],
    ])?;

    let ellipsoid = Body::ellipsoid_axes(&[1.0, 0.5, 2.0])?;
    let out = check_intuitive(&ellipsoid, &wp, 1e-6)?;
    println!("ellipsoid: {:?}, gap {:.2e}", out.verdict, out.gap);

    // Under l1 the origin beats every point of the triangle.
    let l1 = Body::lp_ball(3, 1.0)?;
    let out = check_intuitive(&l1, &wp, 1e-6)?;
    println!("l1: {:?}, gap {:.6}", out.verdict, out.gap);
    if let Some(w) = &out.certificate {
        println!(
            "  F at {:?} is {:.6}, certified hull minimum >= {:.6}",
            w.escaped, w.value, w.lower_bound
        );
    }

    let out = check_affine(&l1, &wp, 1e-6)?;
    println!("l1, affine span of the three points: {:?}, gap {:.6}", out.verdict, out.gap);
    Ok(())
}
