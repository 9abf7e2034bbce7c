//! Machine-readable reports.
//!
//! Reports are JSON with fields in a fixed order and every float written with
//! 17 significant digits, so parsing a report and writing it again gives the
//! same bytes.

use std::io;

use jsr_core::{BoundsBracket, IterationReport, Irreducibility, MatrixSet};
use serde::ser::Serialize;
use serde::{Deserialize, Serialize as SerializeDerive};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::options::{AveragingArg, LookupArg, RunOptions};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct ConfigEcho {
    pub nodes: usize,
    pub tolerance: f64,
    pub max_iters: usize,
    pub averaging: AveragingArg,
    pub lookup: LookupArg,
    pub convexify: bool,
    pub relative_gap: bool,
    pub force: bool,
    pub initial_norm: bool,
}

impl ConfigEcho {
    pub fn new(opts: &RunOptions) -> Self {
        ConfigEcho {
            nodes: opts.nodes,
            tolerance: opts.tolerance,
            max_iters: opts.max_iters,
            averaging: opts.averaging,
            lookup: opts.lookup,
            convexify: opts.convexify,
            relative_gap: opts.relative_gap,
            force: opts.force,
            initial_norm: opts.initial_norm.is_some(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct IrreducibilityEcho {
    pub verdict: String,
    pub margin: f64,
    pub direction: Option<[f64; 2]>,
}

impl From<&Irreducibility<f64>> for IrreducibilityEcho {
    fn from(v: &Irreducibility<f64>) -> Self {
        let direction = match *v {
            Irreducibility::Irreducible { .. } => None,
            Irreducibility::Reducible { direction, .. }
            | Irreducibility::Inconclusive { direction, .. } => Some(direction),
        };
        IrreducibilityEcho {
            verdict: v.label().to_owned(),
            margin: v.margin(),
            direction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct StepEcho {
    pub n: usize,
    pub rho_minus: f64,
    pub rho_plus: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct RunReport {
    pub label: Option<String>,
    pub config: ConfigEcho,
    pub irreducibility: IrreducibilityEcho,
    pub steps: Vec<StepEcho>,
    pub iterations: usize,
    pub rho_lower: f64,
    pub rho_upper: f64,
    pub midpoint: f64,
    pub converged: bool,
    /// Barabanov residual of the final gauge at the midpoint.
    pub residual: f64,
    pub unsupported_regime: bool,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(
        label: Option<String>,
        opts: &RunOptions,
        set: &MatrixSet<f64>,
        report: &IterationReport<f64>,
    ) -> Result<Self, CliError> {
        let (lo, hi) = report.interval();
        let operator = opts.to_config().image_operator(set)?;
        let residual = jsr_core::barabanov_residual(&report.final_norm, &operator, report.midpoint())?;
        Ok(RunReport {
            label,
            config: ConfigEcho::new(opts),
            irreducibility: (&report.irreducibility).into(),
            steps: report
                .steps
                .iter()
                .map(|s| StepEcho {
                    n: s.n,
                    rho_minus: s.rho_minus,
                    rho_plus: s.rho_plus,
                    gamma: s.gamma,
                })
                .collect(),
            iterations: report.iterations(),
            rho_lower: lo,
            rho_upper: hi,
            midpoint: report.midpoint(),
            converged: report.converged,
            residual,
            unsupported_regime: report.unsupported_regime,
            warnings: report.warnings.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct BoundsReport {
    pub label: Option<String>,
    pub depth: usize,
    pub exhaustive: bool,
    pub lower: f64,
    /// Absent when chains were sampled.
    pub upper: Option<f64>,
    pub trace_estimate: f64,
    pub products_evaluated: u64,
    pub seed: Option<u64>,
}

impl BoundsReport {
    pub fn new(label: Option<String>, b: &BoundsBracket<f64>) -> Self {
        BoundsReport {
            label,
            depth: b.depth,
            exhaustive: b.is_exhaustive(),
            lower: b.lower,
            upper: b.upper,
            trace_estimate: b.trace_estimate,
            products_evaluated: b.products_evaluated,
            seed: b.seed,
        }
    }
}

/// Pretty printer that writes floats as `d.dddddddddddddddde±x`.
struct SignificantDigits<'a>(PrettyFormatter<'a>);

impl Formatter for SignificantDigits<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Canonical text of a report. Non-finite floats come out as `null`.
pub fn to_canonical_json<S: Serialize>(value: &S) -> Result<String, CliError> {
    let mut out = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut out, SignificantDigits(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn parse_run_report(text: &str) -> Result<RunReport, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::InvalidInput(e.to_string()))
}

pub fn parse_bounds_report(text: &str) -> Result<BoundsReport, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::InvalidInput(e.to_string()))
}
