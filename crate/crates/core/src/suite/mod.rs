//! Seeded batteries that exercise the whole crate end to end.
//!
//! Each battery covers one numbered criterion and returns a list of named
//! checks. Named suites group batteries; `all` runs every one of them.

mod batteries;
pub mod sample;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub(crate) fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub name: String,
    pub criterion: u8,
    pub passed: bool,
    pub seconds: f64,
    /// Wall-time budget for the battery.
    pub limit_seconds: f64,
    pub checks: Vec<Check>,
}

impl BatteryReport {
    pub fn within_limit(&self) -> bool {
        self.seconds <= self.limit_seconds
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    /// Sorted by battery name.
    pub batteries: Vec<BatteryReport>,
}

struct Battery {
    name: &'static str,
    criterion: u8,
    limit_seconds: f64,
    run: fn(u64) -> Vec<Check>,
}

const BATTERIES: [Battery; 10] = [
    Battery {
        name: "subgradients",
        criterion: 1,
        limit_seconds: 10.0,
        run: batteries::subgradients,
    },
    Battery {
        name: "planar",
        criterion: 2,
        limit_seconds: 120.0,
        run: batteries::planar,
    },
    Battery {
        name: "ellipsoids",
        criterion: 3,
        limit_seconds: 120.0,
        run: batteries::ellipsoids,
    },
    Battery {
        name: "witnesses",
        criterion: 4,
        limit_seconds: 600.0,
        run: batteries::witnesses,
    },
    Battery {
        name: "affine",
        criterion: 5,
        limit_seconds: 300.0,
        run: batteries::affine,
    },
    Battery {
        name: "weights",
        criterion: 6,
        limit_seconds: 60.0,
        run: batteries::weights,
    },
    Battery {
        name: "square",
        criterion: 7,
        limit_seconds: 1.0,
        run: batteries::square,
    },
    Battery {
        name: "shadow",
        criterion: 8,
        limit_seconds: 60.0,
        run: batteries::shadow,
    },
    Battery {
        name: "solvers",
        criterion: 9,
        limit_seconds: 120.0,
        run: batteries::solvers,
    },
    Battery {
        name: "witness_null",
        criterion: 3,
        limit_seconds: 120.0,
        run: batteries::witness_null,
    },
];

/// Suite names accepted by [`run_suite`].
pub const SUITES: [&str; 9] = [
    "all",
    "ellipsoids",
    "planar",
    "shadow",
    "solvers",
    "square",
    "subgradients",
    "weights",
    "witnesses",
];

fn members(suite: &str) -> Option<Vec<&'static Battery>> {
    let pick = |names: &[&str]| BATTERIES.iter().filter(|b| names.contains(&b.name)).collect();
    Some(match suite {
        "all" => BATTERIES.iter().collect(),
        "ellipsoids" => pick(&["ellipsoids", "witness_null"]),
        "witnesses" => pick(&["witnesses", "affine"]),
        "subgradients" | "planar" | "weights" | "square" | "shadow" | "solvers" => pick(&[suite]),
        _ => return None,
    })
}

fn run_battery(b: &Battery, seed: u64) -> BatteryReport {
    let start = Instant::now();
    let checks = (b.run)(seed);
    BatteryReport {
        name: b.name.to_string(),
        criterion: b.criterion,
        passed: checks.iter().all(|c| c.passed),
        seconds: start.elapsed().as_secs_f64(),
        limit_seconds: b.limit_seconds,
        checks,
    }
}

/// Runs the batteries of one criterion (1 to 9).
pub fn run_criterion(criterion: u8, seed: u64) -> Result<Vec<BatteryReport>> {
    let found: Vec<BatteryReport> = BATTERIES
        .iter()
        .filter(|b| b.criterion == criterion)
        .map(|b| run_battery(b, seed))
        .collect();
    if found.is_empty() {
        return Err(Error::InvalidInput(format!("no battery for criterion {criterion}")));
    }
    Ok(found)
}

/// Runs a named suite; batteries run in sequence so their timings are honest.
pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let list = members(name).ok_or_else(|| {
        Error::InvalidInput(format!("unknown suite {name:?}; expected one of {}", SUITES.join(", ")))
    })?;
    let mut batteries: Vec<BatteryReport> = list.into_iter().map(|b| run_battery(b, seed)).collect();
    batteries.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(SuiteReport {
        suite: name.to_string(),
        seed,
        passed: batteries.iter().all(|b| b.passed),
        batteries,
    })
}
