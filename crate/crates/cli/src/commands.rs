use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use jsr_core::{oracle, PolarNorm};

use crate::exit;
use crate::options::RunOptions;
use crate::problem::ProblemFile;
use crate::report::{to_canonical_json, BoundsReport, RunReport};
use crate::sphere::{crossings, SphereData};
use crate::CliError;

pub const REPORT_FILE: &str = "report.json";
pub const BOUNDS_FILE: &str = "bounds.json";
pub const SPHERE_CSV: &str = "sphere.csv";
pub const SPHERE_SVG: &str = "sphere.svg";

/// What a command left on disk and how the process should exit.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Option<PathBuf>,
    pub sphere: Vec<PathBuf>,
    pub exit_code: u8,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundsOptions {
    pub depth: usize,
    /// Sample this many chains instead of enumerating all of them.
    pub samples: Option<u64>,
    pub seed: u64,
}

/// Writes through a sibling temp file and a rename, so readers never see a
/// half-written file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let err = |source| CliError::Write {
        path: path.display().to_string(),
        source,
    };
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents).map_err(err)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        err(e)
    })
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.display().to_string(),
        source,
    })
}

/// Reads the `R` column of a sphere table as a starting gauge.
pub fn load_gauge_csv(path: &Path) -> Result<PolarNorm<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let bad = |line: usize| CliError::InvalidInput(format!("{}: bad row {line}", path.display()));
    let values = text
        .lines()
        .enumerate()
        .skip(1)
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.split(',')
                .nth(1)
                .and_then(|v| v.trim().parse::<f64>().ok())
                .ok_or_else(|| bad(i + 1))
        })
        .collect::<Result<Vec<f64>, CliError>>()?;
    PolarNorm::from_values(values).map_err(|e| CliError::InvalidInput(e.to_string()))
}

fn run_core(
    problem: &ProblemFile,
    opts: &RunOptions,
    progress: &mut dyn Write,
) -> Result<(jsr_core::MatrixSet<f64>, jsr_core::IterationReport<f64>, RunReport), CliError> {
    let set = problem.matrix_set()?;
    let report = jsr_core::run(&set, &opts.to_config())?;
    for step in &report.steps {
        let _ = writeln!(
            progress,
            "i={:4}, Bounds for J.S.R.: {:5.3} < r < {:5.3}",
            step.n, step.rho_minus, step.rho_plus
        );
    }
    for w in &report.warnings {
        let _ = writeln!(progress, "warning: {w}");
    }
    let echo = RunReport::new(problem.label.clone(), opts, &set, &report)?;
    Ok((set, report, echo))
}

fn run_exit(converged: bool) -> u8 {
    if converged {
        exit::CONVERGED
    } else {
        exit::NOT_CONVERGED
    }
}

/// Runs the iteration and writes `report.json` into `out`.
pub fn cmd_jsr(
    problem: &ProblemFile,
    opts: &RunOptions,
    out: &Path,
    progress: &mut dyn Write,
) -> Result<(Outcome, RunReport), CliError> {
    let (_, _, echo) = run_core(problem, opts, progress)?;
    ensure_dir(out)?;
    let path = out.join(REPORT_FILE);
    write_atomic(&path, &to_canonical_json(&echo)?)?;
    let outcome = Outcome {
        report: Some(path),
        sphere: Vec::new(),
        exit_code: run_exit(echo.converged),
    };
    Ok((outcome, echo))
}

/// Product-enumeration bounds, written to `bounds.json`.
pub fn cmd_bounds(
    problem: &ProblemFile,
    opts: &BoundsOptions,
    out: &Path,
    progress: &mut dyn Write,
) -> Result<(Outcome, BoundsReport), CliError> {
    let set = problem.matrix_set()?;
    let bracket = match opts.samples {
        Some(n) => oracle::sampled_bracket(&set, opts.depth, n, opts.seed)?,
        None => oracle::bracket(&set, opts.depth)?,
    };
    let report = BoundsReport::new(problem.label.clone(), &bracket);
    let upper = report
        .upper
        .map_or_else(|| "n/a (sampled)".to_owned(), |u| format!("{u:.6}"));
    let _ = writeln!(
        progress,
        "k={}: lower {:.6}, upper {}, trace {:.6} ({} products)",
        report.depth, report.lower, upper, report.trace_estimate, report.products_evaluated
    );
    ensure_dir(out)?;
    let path = out.join(BOUNDS_FILE);
    write_atomic(&path, &to_canonical_json(&report)?)?;
    let outcome = Outcome {
        report: Some(path),
        sphere: Vec::new(),
        exit_code: exit::CONVERGED,
    };
    Ok((outcome, report))
}

/// Runs the iteration, writes the report and, if the run converged or
/// `force_output` is set, the sphere table and drawing.
pub fn cmd_sphere(
    problem: &ProblemFile,
    opts: &RunOptions,
    force_output: bool,
    out: &Path,
    progress: &mut dyn Write,
) -> Result<(Outcome, Option<SphereData>), CliError> {
    let (set, report, echo) = run_core(problem, opts, progress)?;
    ensure_dir(out)?;
    let report_path = out.join(REPORT_FILE);
    write_atomic(&report_path, &to_canonical_json(&echo)?)?;
    let mut outcome = Outcome {
        report: Some(report_path),
        sphere: Vec::new(),
        exit_code: run_exit(report.converged),
    };
    if !(report.converged || force_output) {
        let _ = writeln!(progress, "not converged; sphere not written (use --force-output)");
        return Ok((outcome, None));
    }
    let data = SphereData::new(
        &set,
        &report.final_norm,
        report.last_step().rho_plus,
        opts.lookup.into(),
    )?;
    if data.levels.len() >= 2 {
        let _ = writeln!(
            progress,
            "level curves 1 and 2 cross {} times",
            crossings(&data.levels[0], &data.levels[1])
        );
    }
    let csv = out.join(SPHERE_CSV);
    let svg = out.join(SPHERE_SVG);
    write_atomic(&csv, &data.to_csv())?;
    write_atomic(&svg, &data.to_svg())?;
    outcome.sphere = vec![csv, svg];
    Ok((outcome, Some(data)))
}
