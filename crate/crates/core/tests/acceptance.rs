//! One line per numbered criterion: PASS only when every check holds and the
//! batteries finish within their wall-time budget.

use intuitive_norms::suite::run_criterion;

const SEED: u64 = 7;

fn main() {
    let mut failed = Vec::new();
    for criterion in 1..=9u8 {
        let reports = run_criterion(criterion, SEED).expect("every criterion has a battery");
        let seconds: f64 = reports.iter().map(|r| r.seconds).sum();
        let limit = reports.iter().map(|r| r.limit_seconds).fold(0.0, f64::max);
        let checks_ok = reports.iter().all(|r| r.passed);
        let ok = checks_ok && seconds <= limit;
        println!(
            "criterion {criterion}: {} ({seconds:.2}s, limit {limit}s) {}",
            if ok { "PASS" } else { "FAIL" },
            reports.iter().map(|r| r.name.as_str()).collect::<Vec<_>>().join(" + ")
        );
        for r in &reports {
            for c in &r.checks {
                println!("    [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
            }
        }
        if !ok {
            failed.push(criterion);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 9 criteria pass (seed {SEED})");
    } else {
        println!("acceptance: failing criteria {failed:?} (seed {SEED})");
        std::process::exit(1);
    }
}
