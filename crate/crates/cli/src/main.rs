use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use jsr_cli::commands::{self, load_gauge_csv};
use jsr_cli::options::{AveragingArg, LookupArg, Switch};
use jsr_cli::{exit, BoundsOptions, CliError, ProblemFile, RunOptions};

/// Joint spectral radius of a finite set of real 2x2 matrices.
#[derive(Parser)]
#[command(name = "jsr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the relaxation iteration and write report.json.
    Run(RunArgs),
    /// Product-enumeration bounds at a fixed depth, written to bounds.json.
    Bounds(BoundsArgs),
    /// Run, then export the unit sphere and level curves (sphere.csv, sphere.svg).
    Sphere {
        #[command(flatten)]
        run: RunArgs,
        /// Write the sphere files even if the run did not converge.
        #[arg(long)]
        force_output: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Problem file (JSON).
    problem: PathBuf,
    /// Grid intervals N (even, at least 8).
    #[arg(long, default_value_t = 3000)]
    nodes: usize,
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    #[arg(long, value_enum, default_value_t = AveragingArg::Arith)]
    averaging: AveragingArg,
    /// `nearest` rounds image angles to the closest grid node instead of interpolating.
    #[arg(long, value_enum, default_value_t = LookupArg::Interp)]
    lookup: LookupArg,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    convexify: Switch,
    /// Stop on (ρ⁺ − ρ⁻)/ρ⁺ < tol instead of the absolute gap.
    #[arg(long)]
    relative_gap: bool,
    /// Run even if the set looks reducible.
    #[arg(long)]
    force: bool,
    /// Start from the R column of an earlier sphere.csv.
    #[arg(long, value_name = "CSV")]
    initial_gauge: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct BoundsArgs {
    problem: PathBuf,
    #[arg(long)]
    depth: usize,
    /// Sample this many random chains instead of enumerating all r^k.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl RunArgs {
    fn options(&self) -> Result<RunOptions, CliError> {
        let initial_norm = self.initial_gauge.as_deref().map(load_gauge_csv).transpose()?;
        Ok(RunOptions {
            nodes: self.nodes,
            tolerance: self.tol,
            max_iters: self.max_iters,
            averaging: self.averaging,
            lookup: self.lookup,
            convexify: self.convexify == Switch::On,
            relative_gap: self.relative_gap,
            force: self.force,
            initial_norm,
        })
    }
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    let mut stdout = io::stdout();
    let outcome = match cli.command {
        Command::Run(args) => {
            let problem = ProblemFile::load(&args.problem)?;
            commands::cmd_jsr(&problem, &args.options()?, &args.out, &mut stdout)?.0
        }
        Command::Bounds(args) => {
            let problem = ProblemFile::load(&args.problem)?;
            let opts = BoundsOptions {
                depth: args.depth,
                samples: args.samples,
                seed: args.seed,
            };
            commands::cmd_bounds(&problem, &opts, &args.out, &mut stdout)?.0
        }
        Command::Sphere { run, force_output } => {
            let problem = ProblemFile::load(&run.problem)?;
            commands::cmd_sphere(&problem, &run.options()?, force_output, &run.out, &mut stdout)?.0
        }
    };
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(exit::INVALID_INPUT),
            };
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
