use intuitive_norms::cli::{self, EXIT_INPUT, EXIT_OK};
use serde_json::Value;
use std::path::PathBuf;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("intuitive").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn report(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, EXIT_OK, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("intuitive-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

/// Drops the wall-time field so reports can be compared byte for byte.
fn without_time(text: &str) -> String {
    text.lines().filter(|l| !l.contains("\"wall_seconds\"")).collect::<Vec<_>>().join("\n")
}

#[test]
fn euclidean_check_is_intuitive() {
    let r = report(&[
        "check",
        "--body",
        "lp:2",
        "--points",
        "(0,0,1);(0,1,0);(1,0,0)",
        "--weights",
        "1/3;1/3;1/3",
    ]);
    assert_eq!(r["result"]["verdict"], "intuitive_at_tol");
    assert_eq!(r["seed"], 0);
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert!(r["wall_seconds"].as_f64().unwrap() >= 0.0);
    assert_eq!(r["config"]["command"]["check"]["instance"]["body"], "lp:2");
}

#[test]
fn taxicab_square_median_has_value_one() {
    let r = report(&["median", "--body", "l1", "--points", "(0,1);(1,0)", "--weights", "0.5;0.5"]);
    assert!((r["result"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(r["result"]["status"], "converged");
}

#[test]
fn l1_hull_check_reports_a_certified_violation() {
    let r = report(&["check", "--body", "l1", "--points", "(1,0,0);(0,1,0);(0,0,1)"]);
    assert_eq!(r["result"]["verdict"], "violated");
    let w = &r["result"]["certificate"];
    assert!(w["gap"].as_f64().unwrap() > 0.0);
    assert!(w["separator"]["margin"].as_f64().unwrap() > 0.0);
}

#[test]
fn l4_search_replays() {
    let (code, out, err) = run(&["search", "--body", "lp:4", "--trials", "10000", "--seed", "42"]);
    assert_eq!(code, EXIT_OK, "stderr: {err}");
    let r: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["seed"], 42);
    let w = &r["result"]["witness"];
    assert!(w.is_object(), "no witness at this budget: {}", r["result"]);
    let path = scratch("l4-witness.json", &w.to_string());
    let replay = report(&["search", "--replay", path.to_str().unwrap()]);
    assert!(replay["result"]["recertified_gap"].as_f64().unwrap() > 0.0);

    // Moving the escaped point onto a data point breaks the certificate.
    let mut bad = w.clone();
    bad["escaped"] = bad["wp"]["points"][0].clone();
    let path = scratch("tampered.json", &bad.to_string());
    let (code, _, err) = run(&["search", "--replay", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("tampered.json"));
}

#[test]
fn reports_are_deterministic() {
    let args = ["search", "--body", "l1", "--trials", "60", "--seed", "5"];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(without_time(&a), without_time(&b));
}

#[test]
fn shadow_scan_emits_csv() {
    let (code, out, _) = run(&["shadow", "--body", "lp:4", "--directions", "8", "--out", "csv"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "l1,l2,l3,sigma3");
    assert_eq!(lines.len(), 9);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 4));
}

#[test]
fn single_section_report() {
    let r = report(&["shadow", "--body", "lp:4", "--direction", "(1,1,1)"]);
    assert!(r["result"]["sigma3"].as_f64().unwrap() > 0.01);
    let r = report(&["shadow", "--body", "ellipsoid:1,2,3", "--direction", "(1,1,1)"]);
    assert!(r["result"]["sigma3"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn defect_report() {
    let r = report(&["defect", "--body", "sphere", "--seed", "3"]);
    assert!(r["result"]["defect"].as_f64().unwrap() <= 1e-9);
    let r = report(&["defect", "--body", "l1", "--seed", "3"]);
    assert!(r["result"]["defect"].as_f64().unwrap() > 0.5);
}

#[test]
fn polytope_presets_from_files() {
    let h = scratch("cube.json", "[[1,0,0],[0,1,0],[0,0,1]]");
    let v = scratch("cross.json", "[[1,0,0],[0,1,0],[0,0,1]]");
    let hp = format!("hpoly:{}", h.display());
    let vp = format!("vpoly:{}", v.display());
    let r = report(&["median", "--body", &hp, "--points", "(0,0,0);(2,1,0)"]);
    assert!((r["result"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let r = report(&["median", "--body", &vp, "--points", "(0,0,0);(2,1,0)"]);
    assert!((r["result"]["value"].as_f64().unwrap() - 1.5).abs() < 1e-9);
}

#[test]
fn instance_file_with_embedded_body() {
    let path = scratch(
        "instance.json",
        r#"{"body": {"type": "lp_ball", "p": 1, "scales": [1, 1]}, "points": [[0, 1], [1, 0]], "weights": [1, 1]}"#,
    );
    let r = report(&["median", "--instance", path.to_str().unwrap()]);
    assert!((r["result"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn inline_body_json() {
    let body = r#"{"type":"ellipsoid","matrix":[[1,0],[0,4]]}"#;
    let r = report(&["median", "--body", body, "--points", "(0,0);(0,1)", "--weights", "3;1"]);
    assert!((r["result"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn input_errors_exit_one() {
    let (code, _, err) = run(&["median", "--body", "l7", "--points", "(0,1)"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("l7"));

    let path = scratch("broken.json", "{\"points\": [[0, 1], [1, 0]], \"colour\": 1}");
    let (code, _, err) = run(&["median", "--body", "l1", "--instance", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("broken.json") && err.contains("colour"));

    let (code, _, _) = run(&["median", "--body", "l1", "--points", "(0,1);(1,0,2)"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = run(&["median", "--body", "l1", "--points", "(0,1)", "--bogus"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = run(&["shadow", "--body", "linf"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = run(&["defect", "--body", "l1", "--out", "csv"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = run(&["suite", "everything"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn square_suite_passes() {
    let r = report(&["suite", "square", "--seed", "7"]);
    assert_eq!(r["result"]["passed"], true);
    assert_eq!(r["result"]["batteries"][0]["name"], "square");
}
