//! Numerical ellipsoid detectors: the parallelogram defect and shadow-rank scans.

use intuitive_norms::ellipsoid::{mm_scan, parallelogram_defect, SHADOW_SAMPLES};
use intuitive_norms::Body;

fn main() -> intuitive_norms::Result<()> {
    let bodies = [
        ("ellipsoid", Body::ellipsoid_axes(&[1.0, 2.0, 0.5])?),
        ("l1.5", Body::lp_ball(3, 1.5)?),
        ("l4", Body::lp_ball(3, 4.0)?),
        ("cube", Body::cube(3)?),
    ];
    for (name, body) in &bodies {
        let defect = parallelogram_defect(body, 2000, 1);
        match mm_scan(body, 64, SHADOW_SAMPLES, 1) {
            Ok(scan) => println!(
                "{name:>9}: defect {defect:.3e}, max sigma3 {:.3e} at {:?}",
                scan.max_sigma3, scan.argmax
            ),
            Err(e) => println!("{name:>9}: defect {defect:.3e}, no scan ({e})"),
        }
    }
    Ok(())
}
