use clap::ValueEnum;
use jsr_core::{Averaging, Lookup, PolarNorm, RunConfig, StoppingRule};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AveragingArg {
    #[default]
    Arith,
    Geom,
    Harm,
}

impl From<AveragingArg> for Averaging {
    fn from(a: AveragingArg) -> Self {
        match a {
            AveragingArg::Arith => Averaging::Arithmetic,
            AveragingArg::Geom => Averaging::Geometric,
            AveragingArg::Harm => Averaging::Harmonic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LookupArg {
    #[default]
    Interp,
    Nearest,
}

impl From<LookupArg> for Lookup {
    fn from(l: LookupArg) -> Self {
        match l {
            LookupArg::Interp => Lookup::Interpolate,
            LookupArg::Nearest => Lookup::Nearest,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

/// Everything that shapes a run, as given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub nodes: usize,
    pub tolerance: f64,
    pub max_iters: usize,
    pub averaging: AveragingArg,
    pub lookup: LookupArg,
    pub convexify: bool,
    pub relative_gap: bool,
    pub force: bool,
    pub initial_norm: Option<PolarNorm<f64>>,
}

impl Default for RunOptions {
    fn default() -> Self {
        let c = RunConfig::<f64>::default();
        RunOptions {
            nodes: c.nodes,
            tolerance: c.tolerance,
            max_iters: c.max_iters,
            averaging: AveragingArg::Arith,
            lookup: LookupArg::Interp,
            convexify: c.convexify,
            relative_gap: false,
            force: false,
            initial_norm: None,
        }
    }
}

impl RunOptions {
    pub fn to_config(&self) -> RunConfig<f64> {
        RunConfig {
            nodes: self.nodes,
            tolerance: self.tolerance,
            max_iters: self.max_iters,
            averaging: self.averaging.into(),
            lookup: self.lookup.into(),
            convexify: self.convexify,
            stopping: if self.relative_gap {
                StoppingRule::RelativeGap
            } else {
                StoppingRule::AbsoluteGap
            },
            force: self.force,
            initial_norm: self.initial_norm.clone(),
            record_norms: false,
        }
    }
}
