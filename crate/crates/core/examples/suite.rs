//! Runs a named battery suite and prints one line per check.
//! Usage: `cargo run --release --example suite -- [name] [seed]`.

use intuitive_norms::suite::run_suite;

fn main() -> intuitive_norms::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "square".into());
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let report = run_suite(&name, seed)?;
    for b in &report.batteries {
        println!("{} ({:.2}s): {}", b.name, b.seconds, if b.passed { "pass" } else { "FAIL" });
        for c in &b.checks {
            println!("  {}: {}", c.name, c.detail);
        }
    }
    std::process::exit(if report.passed { 0 } else { 1 });
}
