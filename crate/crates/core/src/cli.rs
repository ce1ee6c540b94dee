//! Command-line front end.
//!
//! Every command prints one JSON report (or CSV rows for shadow scans) with
//! the parsed configuration, the crate version, the wall time and the result.
//! Exit status: 0 when the run completed (including "no witness found"), 1
//! on input errors (including a replayed witness that does not recertify),
//! 2 when a solver did not converge, 3 when a suite battery failed.

use crate::body::Body;
use crate::config::Tolerances;
use crate::ellipsoid::{self, SHADOW_SAMPLES};
use crate::error::{Error, Result};
use crate::intuition::{self, SearchConfig, Witness, WitnessRegion};
use crate::median::{self, Region, WeightedPoints};
use crate::suite;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "intuitive", version, about = "Medians under gauge norms and the hull property")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every random choice; echoed in the report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionArg {
    Whole,
    Hull,
    Affine,
}

/// Body and instance flags shared by the instance commands.
#[derive(Debug, Clone, clap::Args, Serialize)]
pub struct InstanceArgs {
    /// Preset (sphere, ellipsoid:a,b,c, lp:p, l1, linf, hpoly:FILE, vpoly:FILE),
    /// inline body JSON, or a path to a body JSON file. Overrides the body
    /// of an instance file.
    #[arg(long, required_unless_present = "instance")]
    pub body: Option<String>,
    /// Points as "(x1,y1,..);(x2,y2,..)".
    #[arg(long, conflicts_with = "instance")]
    pub points: Option<String>,
    /// Weights as "w1;w2;..", fractions allowed; normalized to sum 1.
    /// Uniform when omitted.
    #[arg(long, requires = "points")]
    pub weights: Option<String>,
    /// JSON file `{"body": {..}, "points": [[..]], "weights": [..]}`; body
    /// and weights are optional.
    #[arg(long)]
    pub instance: Option<String>,
}

#[derive(Debug, Clone, clap::Args, Serialize)]
pub struct BodyArgs {
    /// Same forms as for instance commands.
    #[arg(long)]
    pub body: String,
    /// Dimension for presets without one (sphere, lp:p, l1, linf).
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Minimize the weighted objective, optionally over the hull or affine span.
    Median {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value_t = RegionArg::Whole)]
        region: RegionArg,
    },
    /// Decide whether a median lies in the hull (or affine span) of the points.
    Check {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = Tolerances::default().verdict_tol)]
        tol: f64,
        /// Test the affine span instead of the hull.
        #[arg(long)]
        affine: bool,
    },
    /// Randomized search for a certified witness in dimension 3.
    Search {
        #[arg(long, required_unless_present = "replay")]
        body: Option<String>,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        /// Points per instance.
        #[arg(long, default_value_t = 3)]
        n_points: usize,
        #[arg(long, value_enum, default_value_t = RegionArg::Hull)]
        region: RegionArg,
        /// Re-certify a stored witness instead of searching.
        #[arg(long, conflicts_with = "body")]
        replay: Option<String>,
    },
    /// Shadow-rank test of one section, or a scan over many directions.
    Shadow {
        #[command(flatten)]
        body: BodyArgs,
        /// Single direction "(a,b,c)"; scan when omitted.
        #[arg(long)]
        direction: Option<String>,
        #[arg(long, default_value_t = 64)]
        directions: usize,
        /// Boundary samples per section.
        #[arg(long, default_value_t = SHADOW_SAMPLES)]
        samples: usize,
    },
    /// Parallelogram-law defect over seeded sample pairs.
    Defect {
        #[command(flatten)]
        body: BodyArgs,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Run a named battery suite.
    Suite {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(suite::SUITES))]
        name: String,
    },
}

#[derive(Debug, Serialize)]
struct Report<'a, T: Serialize> {
    command: &'static str,
    config: &'a Cli,
    version: &'static str,
    seed: u64,
    wall_seconds: f64,
    result: T,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    #[serde(default)]
    body: Option<Body>,
    points: Vec<Vec<f64>>,
    #[serde(default)]
    weights: Option<Vec<f64>>,
}

#[derive(Debug, Serialize)]
struct DefectResult {
    defect: f64,
    samples: usize,
}

#[derive(Debug, Serialize)]
struct ReplayResult {
    recertified_gap: f64,
    witness: Witness,
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("{origin}: {e}")))
}

fn numbers(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("{s:?} is not a number")))
        })
        .collect()
}

fn fraction(text: &str) -> Result<f64> {
    let bad = || Error::InvalidInput(format!("{text:?} is not a weight"));
    match text.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            Ok(a / b)
        }
        None => text.trim().parse().map_err(|_| bad()),
    }
}

/// One vector written as `(a,b,..)`, parentheses optional.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let t = text.trim();
    let t = t.strip_prefix('(').unwrap_or(t);
    let t = t.strip_suffix(')').unwrap_or(t);
    numbers(t)
}

/// `"(x1,y1);(x2,y2)"` into points.
pub fn parse_points(text: &str) -> Result<Vec<Vec<f64>>> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(parse_vector).collect()
}

/// `"1/3;1/3;1/3"` into raw weights.
pub fn parse_weights(text: &str) -> Result<Vec<f64>> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(fraction).collect()
}

/// A preset name, inline body JSON or a body JSON file.
pub fn parse_body(spec: &str, dim: usize) -> Result<Body> {
    let spec = spec.trim();
    let rows = |path: &str| -> Result<Vec<Vec<f64>>> { parse_json(&read(path)?, path) };
    if spec.starts_with('{') {
        return parse_json(spec, "--body");
    }
    match spec.split_once(':') {
        None => match spec {
            "sphere" | "ball" => Body::euclidean_ball(dim),
            "l1" => Body::lp_ball(dim, 1.0),
            "linf" | "cube" => Body::cube(dim),
            _ if Path::new(spec).is_file() => parse_json(&read(spec)?, spec),
            _ => Err(Error::InvalidInput(format!("unknown body {spec:?}"))),
        },
        Some(("ellipsoid", axes)) => Body::ellipsoid_axes(&numbers(axes)?),
        Some(("lp", p)) => match p.trim() {
            "inf" => Body::cube(dim),
            p => Body::lp_ball(dim, numbers(p)?[0]),
        },
        Some(("hpoly", path)) => Body::h_polytope(rows(path)?),
        Some(("vpoly", path)) => Body::v_polytope(rows(path)?),
        Some(_) if Path::new(spec).is_file() => parse_json(&read(spec)?, spec),
        Some((kind, _)) => Err(Error::InvalidInput(format!("unknown body preset {kind:?}"))),
    }
}

fn load_instance(args: &InstanceArgs) -> Result<(Body, WeightedPoints)> {
    let (points, weights, stored) = match (&args.points, &args.instance) {
        (Some(p), _) => (parse_points(p)?, args.weights.as_deref().map(parse_weights).transpose()?, None),
        (None, Some(path)) => {
            let f: InstanceFile = parse_json(&read(path)?, path)?;
            (f.points, f.weights, f.body)
        }
        (None, None) => return Err(Error::InvalidInput("give --points or --instance".into())),
    };
    let dim = points.first().map_or(0, Vec::len);
    let body = match (&args.body, stored) {
        (Some(spec), _) => parse_body(spec, dim)?,
        (None, Some(b)) => b,
        (None, None) => return Err(Error::InvalidInput("the instance file has no body; give --body".into())),
    };
    let wp = match weights {
        Some(w) => WeightedPoints::normalized(points, w)?,
        None => WeightedPoints::uniform(points)?,
    };
    if wp.dim() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: wp.dim(),
        });
    }
    Ok((body, wp))
}

fn witness_region(r: RegionArg) -> Result<WitnessRegion> {
    match r {
        RegionArg::Hull => Ok(WitnessRegion::Hull),
        RegionArg::Affine => Ok(WitnessRegion::AffineSpan),
        RegionArg::Whole => Err(Error::InvalidInput("search needs --region hull or affine".into())),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::IterationCap { .. } | Error::Inconclusive(_) => EXIT_NONCONVERGENCE,
        _ => EXIT_INPUT,
    }
}

fn emit<T: Serialize, W: Write>(out: &mut W, cli: &Cli, name: &'static str, start: Instant, result: T) -> Result<()> {
    let report = Report {
        command: name,
        config: cli,
        version: env!("CARGO_PKG_VERSION"),
        seed: cli.seed,
        wall_seconds: start.elapsed().as_secs_f64(),
        result,
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(())
}

fn json_only(cli: &Cli) -> Result<()> {
    if cli.out == OutFormat::Csv {
        return Err(Error::InvalidInput("CSV output is only available for shadow scans".into()));
    }
    Ok(())
}

fn dispatch<W: Write>(cli: &Cli, out: &mut W) -> Result<i32> {
    let start = Instant::now();
    match &cli.command {
        Command::Median { instance, region } => {
            json_only(cli)?;
            let (body, wp) = load_instance(instance)?;
            let r = match region {
                RegionArg::Whole => median::solve_unconstrained(&body, &wp)?,
                RegionArg::Hull => median::solve_constrained(&body, &wp, &Region::Hull)?,
                RegionArg::Affine => median::solve_constrained(&body, &wp, &Region::AffineSpan)?,
            };
            let code = if r.is_converged() { EXIT_OK } else { EXIT_NONCONVERGENCE };
            emit(out, cli, "median", start, r)?;
            Ok(code)
        }
        Command::Check { instance, tol, affine } => {
            json_only(cli)?;
            let (body, wp) = load_instance(instance)?;
            let r = if *affine {
                intuition::check_affine(&body, &wp, *tol)?
            } else {
                intuition::check_intuitive(&body, &wp, *tol)?
            };
            emit(out, cli, "check", start, r)?;
            Ok(EXIT_OK)
        }
        Command::Search {
            body,
            trials,
            n_points,
            region,
            replay,
        } => {
            json_only(cli)?;
            if let Some(path) = replay {
                let w = Witness::from_json(&read(path)?).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))?;
                return match w.recertify() {
                    Ok(gap) => {
                        emit(out, cli, "search", start, ReplayResult { recertified_gap: gap, witness: w })?;
                        Ok(EXIT_OK)
                    }
                    Err(e) => Err(Error::InvalidInput(format!("{path}: witness does not recertify: {e}"))),
                };
            }
            let body = parse_body(body.as_deref().unwrap_or_default(), 3)?;
            let cfg = SearchConfig {
                n_points: *n_points,
                trials: *trials,
                seed: cli.seed,
                region: witness_region(*region)?,
                ..SearchConfig::default()
            };
            let r = intuition::search_witness(&body, &cfg)?;
            emit(out, cli, "search", start, r)?;
            Ok(EXIT_OK)
        }
        Command::Shadow {
            body,
            direction,
            directions,
            samples,
        } => {
            let b = parse_body(&body.body, body.dim)?;
            let reports = match direction {
                Some(d) => vec![ellipsoid::shadow_rank(&b, &parse_vector(d)?, *samples)?],
                None => ellipsoid::mm_scan(&b, *directions, *samples, cli.seed)?.reports,
            };
            match cli.out {
                OutFormat::Csv => {
                    writeln!(out, "l1,l2,l3,sigma3")?;
                    for r in &reports {
                        let d = &r.direction;
                        writeln!(out, "{},{},{},{}", d[0], d[1], d[2], r.sigma3)?;
                    }
                }
                OutFormat::Json if direction.is_some() => emit(out, cli, "shadow", start, &reports[0])?,
                OutFormat::Json => {
                    let (max_sigma3, argmax) = reports
                        .iter()
                        .fold((f64::NEG_INFINITY, vec![]), |acc, r| {
                            if r.sigma3 > acc.0 {
                                (r.sigma3, r.direction.clone())
                            } else {
                                acc
                            }
                        });
                    let summary = ellipsoid::ScanSummary {
                        max_sigma3,
                        argmax,
                        reports,
                    };
                    emit(out, cli, "shadow", start, summary)?
                }
            }
            Ok(EXIT_OK)
        }
        Command::Defect { body, samples } => {
            json_only(cli)?;
            let b = parse_body(&body.body, body.dim)?;
            let defect = ellipsoid::parallelogram_defect(&b, *samples, cli.seed);
            emit(out, cli, "defect", start, DefectResult { defect, samples: *samples })?;
            Ok(EXIT_OK)
        }
        Command::Suite { name } => {
            json_only(cli)?;
            let r = suite::run_suite(name, cli.seed)?;
            let code = if r.passed { EXIT_OK } else { EXIT_FAILED };
            emit(out, cli, "suite", start, r)?;
            Ok(code)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
