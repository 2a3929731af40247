use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gathering::continuous::{self, ContinuousConfig};
use gathering::discrete::{self, DiscreteConfig};
use gathering::harness::{self, SweepConfig};
use gathering::theory::BoundsReport;
use gathering::trace::{self, Model};
use gathering::Error;

const EXIT_INVALID: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gather",
    version,
    about = "Randomized gathering simulations and bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Discrete,
    Continuous,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Discrete => Model::Discrete,
            ModelArg::Continuous => Model::Continuous,
        }
    }
}

/// Flags shared by `sim` and `sweep`.
#[derive(Args)]
struct ModelFlags {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Side of the initial square [0, S]^2 (default 50 discrete, 5 continuous).
    #[arg(long)]
    spread: Option<f64>,
    /// Blind-zone radius (continuous).
    #[arg(long, default_value_t = continuous::DEFAULT_DELTA)]
    delta: f64,
    /// Integration substep; 1/T must be an integer (continuous).
    #[arg(long, default_value_t = continuous::DEFAULT_SUBSTEP)]
    substep: f64,
    /// Cap on steps (discrete) or unit intervals (continuous).
    #[arg(long)]
    steps: Option<u64>,
    /// Jump length (discrete).
    #[arg(long, default_value_t = 1.0)]
    step_size: f64,
    /// Gathering radius that ends a discrete run.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
}

impl ModelFlags {
    fn spread(&self) -> f64 {
        self.spread.unwrap_or(match self.model {
            ModelArg::Discrete => discrete::DEFAULT_SPREAD,
            ModelArg::Continuous => 5.0,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write its trace and summary.
    Sim {
        #[command(flatten)]
        flags: ModelFlags,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Keep every R-th frame in the trace.
        #[arg(long, default_value_t = 1)]
        record_every: u64,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        summary: PathBuf,
        /// Per-interval series CSV (continuous only).
        #[arg(long)]
        series: Option<PathBuf>,
    },
    /// Run seeded repetitions over a list of agent counts.
    Sweep {
        #[command(flatten)]
        flags: ModelFlags,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long)]
        reps: usize,
        #[arg(long)]
        base_seed: u64,
        /// Summaries CSV; the fit is written alongside as <stem>.fit.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print every closed-form bound as JSON.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        dmax: f64,
    },
}

fn create(path: &PathBuf) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(path)?))
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Sim {
            flags,
            n,
            seed,
            record_every,
            trace,
            summary,
            series,
        } => {
            let spread = flags.spread();
            match flags.model {
                ModelArg::Discrete => {
                    let config = DiscreteConfig {
                        n,
                        step_size: flags.step_size,
                        spread,
                        seed,
                        max_steps: flags.steps.unwrap_or(discrete::DEFAULT_MAX_STEPS),
                        convergence_radius: flags.radius,
                        record_every,
                    };
                    let run = discrete::run_discrete(&config)?;
                    run.trace.write_csv(create(&trace)?)?;
                    trace::write_summaries_csv(&[run.summary], create(&summary)?)?;
                }
                ModelArg::Continuous => {
                    let config = ContinuousConfig {
                        n,
                        delta: flags.delta,
                        substep: flags.substep,
                        spread,
                        seed,
                        max_intervals: flags.steps.unwrap_or(continuous::DEFAULT_MAX_INTERVALS),
                        record_every,
                    };
                    let run = continuous::run_continuous(&config)?;
                    run.trace.write_csv(create(&trace)?)?;
                    trace::write_summaries_csv(&[run.summary], create(&summary)?)?;
                    if let Some(path) = series {
                        trace::write_series_csv(&run.series, create(&path)?)?;
                    }
                }
            }
        }
        Command::Sweep {
            flags,
            n_list,
            reps,
            base_seed,
            out,
        } => {
            let mut config = SweepConfig::new(flags.model.into(), n_list, reps, base_seed);
            config.spread = flags.spread();
            config.step_size = flags.step_size;
            config.convergence_radius = flags.radius;
            config.delta = flags.delta;
            config.substep = flags.substep;
            if let Some(cap) = flags.steps {
                config.max_steps = cap;
                config.max_intervals = cap;
            }
            let (_, fit) = harness::run_sweep_to(&config, &out)?;
            let skipped = fit.not_converged();
            if skipped > 0 {
                eprintln!(
                    "warning: {skipped} run(s) did not converge and were left out of the fit"
                );
            }
        }
        Command::Bounds { n, delta, dmax } => {
            let report = BoundsReport::compute(n, delta, dmax)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INVALID)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { EXIT_IO } else { EXIT_INVALID })
        }
    }
}
