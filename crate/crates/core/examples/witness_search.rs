//! Random search for a certified witness under the l4 norm, then a replay
//! from JSON. Pass a seed as the first argument.

use intuitive_norms::intuition::{search_witness, SearchConfig, Witness, WitnessRegion};
use intuitive_norms::Body;

fn main() -> intuitive_norms::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let l4 = Body::lp_ball(3, 4.0)?;
    for region in [WitnessRegion::Hull, WitnessRegion::AffineSpan] {
        let cfg = SearchConfig {
            trials: 300,
            seed,
            region,
            ..SearchConfig::default()
        };
        let out = search_witness(&l4, &cfg)?;
        println!(
            "{region:?}: {} of {} trials scored, best sampled gap {:.4}, after refinement {:.4}",
            out.scored, out.trials, out.best_gap, out.refined_gap
        );
        match out.witness {
            Some(w) => {
                let replayed = Witness::from_json(&w.to_json())?.recertify()?;
                println!("  certified gap {:.6}, replayed {:.6}", w.gap, replayed);
            }
            None => println!("  no witness found at this budget"),
        }
    }
    Ok(())
}
