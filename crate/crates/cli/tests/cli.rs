use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsr_cli::report::{parse_bounds_report, parse_run_report, to_canonical_json};
use jsr_cli::{cmd_bounds, cmd_jsr, cmd_sphere, BoundsOptions, ProblemFile, RunOptions};

fn problems() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../problems")
}

fn problem(name: &str) -> ProblemFile {
    ProblemFile::load(&problems().join(name)).unwrap()
}

fn jsr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jsr")).args(args).output().unwrap()
}

fn sink() -> Vec<u8> {
    Vec::new()
}

#[test]
fn example1_report_interval() {
    let dir = tempfile::tempdir().unwrap();
    let (outcome, report) =
        cmd_jsr(&problem("example1.json"), &RunOptions::default(), dir.path(), &mut sink()).unwrap();
    assert_eq!(outcome.exit_code, 0);
    assert!(report.converged);
    assert!(report.rho_lower >= 1.616 && report.rho_upper <= 1.620);
    assert_eq!(report.irreducibility.verdict, "irreducible");
    assert_eq!(report.steps.len(), report.iterations);
    assert!(outcome.report.unwrap().exists());
}

#[test]
fn example2_midpoint() {
    let dir = tempfile::tempdir().unwrap();
    let (_, report) =
        cmd_jsr(&problem("example2.json"), &RunOptions::default(), dir.path(), &mut sink()).unwrap();
    assert!((report.midpoint - 1.347).abs() < 2e-3, "{}", report.midpoint);
}

#[test]
fn report_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    cmd_jsr(&problem("example2.json"), &RunOptions::default(), dir.path(), &mut sink()).unwrap();
    let text = fs::read_to_string(dir.path().join("report.json")).unwrap();
    let parsed = parse_run_report(&text).unwrap();
    assert_eq!(to_canonical_json(&parsed).unwrap(), text);
}

#[test]
fn runs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let opts = RunOptions {
        lookup: jsr_cli::LookupArg::Nearest,
        ..RunOptions::default()
    };
    cmd_jsr(&problem("example1.json"), &opts, a.path(), &mut sink()).unwrap();
    cmd_jsr(&problem("example1.json"), &opts, b.path(), &mut sink()).unwrap();
    assert_eq!(
        fs::read(a.path().join("report.json")).unwrap(),
        fs::read(b.path().join("report.json")).unwrap()
    );
}

#[test]
fn progress_lines_format() {
    let dir = tempfile::tempdir().unwrap();
    let mut out = sink();
    cmd_jsr(&problem("example1.json"), &RunOptions::default(), dir.path(), &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("i=   1, Bounds for J.S.R.: "), "{first}");
    assert!(text.lines().last().unwrap().ends_with("< r < 1.618"));
}

#[test]
fn reducible_pair_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let err = cmd_jsr(&problem("reducible_pair.json"), &RunOptions::default(), &out, &mut sink())
        .unwrap_err();
    assert_eq!(err.exit_code(), 4);
    assert!(!out.join("report.json").exists());
}

#[test]
fn forced_reducible_run_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let opts = RunOptions {
        force: true,
        ..RunOptions::default()
    };
    let (_, report) = cmd_jsr(&problem("reducible_pair.json"), &opts, dir.path(), &mut sink()).unwrap();
    assert!(report.unsupported_regime);
    assert_eq!(report.irreducibility.verdict, "reducible");
}

#[test]
fn bounds_examples() {
    let dir = tempfile::tempdir().unwrap();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let opts = |depth| BoundsOptions { depth, ..BoundsOptions::default() };

    let (_, b) = cmd_bounds(&problem("example1.json"), &opts(2), dir.path(), &mut sink()).unwrap();
    assert!((b.lower - golden).abs() < 1e-12);

    let (_, b) = cmd_bounds(&problem("identity.json"), &opts(5), dir.path(), &mut sink()).unwrap();
    assert_eq!((b.lower, b.upper), (1.0, Some(1.0)));

    let (_, b) = cmd_bounds(&problem("example2.json"), &opts(8), dir.path(), &mut sink()).unwrap();
    assert!(b.lower <= 1.347 && 1.347 <= b.upper.unwrap());
    assert_eq!(b.products_evaluated, 3u64.pow(8));

    let text = fs::read_to_string(dir.path().join("bounds.json")).unwrap();
    assert_eq!(to_canonical_json(&parse_bounds_report(&text).unwrap()).unwrap(), text);
}

#[test]
fn bounds_cap_and_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let p = problem("example2.json");
    let exhaustive = BoundsOptions { depth: 14, ..BoundsOptions::default() };
    let err = cmd_bounds(&p, &exhaustive, dir.path(), &mut sink()).unwrap_err();
    assert_eq!(err.exit_code(), 5);

    let sampled = BoundsOptions { depth: 14, samples: Some(2000), seed: 7 };
    let (_, b) = cmd_bounds(&p, &sampled, dir.path(), &mut sink()).unwrap();
    assert_eq!(b.upper, None);
    assert_eq!(b.seed, Some(7));
    assert!(!b.exhaustive);
    assert!(b.lower <= 1.3485);
}

#[test]
fn sphere_files_for_rotation_scaling() {
    let dir = tempfile::tempdir().unwrap();
    let (outcome, data) = cmd_sphere(
        &problem("rotation_scaling.json"),
        &RunOptions::default(),
        false,
        dir.path(),
        &mut sink(),
    )
    .unwrap();
    let data = data.unwrap();
    assert_eq!(outcome.sphere.len(), 2);
    assert!(data.roundness_defect() < 1e-6);

    let csv = fs::read_to_string(dir.path().join("sphere.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("phi,R,invR,level_1"));
    assert_eq!(lines.count(), 3001);

    let svg = fs::read_to_string(dir.path().join("sphere.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains(r#"viewBox="0 0 600 600""#));
    assert!(svg.contains(r#"stroke-dasharray="1 3""#));
    // Every curve is closed: the polyline ends where it starts.
    let polylines: Vec<&str> = svg
        .lines()
        .filter_map(|l| l.strip_prefix("<polyline points=\""))
        .map(|l| &l[..l.find('"').unwrap()])
        .collect();
    assert_eq!(polylines.len(), 2);
    for pts in polylines {
        let pts: Vec<&str> = pts.split(' ').collect();
        assert_eq!(pts.first(), pts.last());
    }
}

#[test]
fn sphere_needs_convergence_or_force_output() {
    let dir = tempfile::tempdir().unwrap();
    let opts = RunOptions {
        max_iters: 2,
        ..RunOptions::default()
    };
    let p = problem("example1.json");
    let (outcome, data) = cmd_sphere(&p, &opts, false, dir.path(), &mut sink()).unwrap();
    assert_eq!(outcome.exit_code, 2);
    assert!(data.is_none());
    assert!(dir.path().join("report.json").exists());
    assert!(!dir.path().join("sphere.csv").exists());

    let (outcome, data) = cmd_sphere(&p, &opts, true, dir.path(), &mut sink()).unwrap();
    assert_eq!(outcome.exit_code, 2);
    assert!(data.is_some());
    assert!(dir.path().join("sphere.csv").exists());
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let p = |name: &str| problems().join(name).to_str().unwrap().to_owned();

    let ok = jsr(&["run", &p("example1.json"), "--out", out]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("Bounds for J.S.R."));

    let slow = jsr(&["run", &p("example1.json"), "--max-iters", "3", "--out", out]);
    assert_eq!(slow.status.code(), Some(2));

    let bad_file = dir.path().join("bad.json");
    fs::write(&bad_file, r#"{"dimension":3,"matrices":[[1,0,0,1]]}"#).unwrap();
    for args in [
        vec!["run", bad_file.to_str().unwrap()],
        vec!["run", "/no/such/file.json"],
        vec!["run", &p("example1.json"), "--nodes", "7", "--out", out],
        vec!["run", &p("example1.json"), "--averaging", "median"],
        vec!["frobnicate"],
    ] {
        assert_eq!(jsr(&args).status.code(), Some(3), "{args:?}");
    }

    assert_eq!(jsr(&["run", &p("reducible_pair.json"), "--out", out]).status.code(), Some(4));
    assert_eq!(
        jsr(&["bounds", &p("example2.json"), "--depth", "14", "--out", out]).status.code(),
        Some(5)
    );
    assert_eq!(jsr(&["--help"]).status.code(), Some(0));
}

#[test]
fn binary_fixed_point_restart() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let p = problems().join("example1.json");
    let first = jsr(&["sphere", p.to_str().unwrap(), "--out", out]);
    assert_eq!(first.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&first.stdout).contains("cross 4 times"));

    let csv = dir.path().join("sphere.csv");
    let again = jsr(&["run", p.to_str().unwrap(), "--initial-gauge", csv.to_str().unwrap(), "--out", out]);
    assert_eq!(again.status.code(), Some(0));
    let report = parse_run_report(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert!(report.config.initial_norm);
    assert!(report.iterations <= 2, "{}", report.iterations);
}
