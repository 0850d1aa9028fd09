//! Command-line interface.
//!
//! Exit codes: 0 success (including NSF outcomes and refusal rows), 1
//! usage or configuration error, 2 data or I/O error, 3 failed
//! oracle-check.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use seldonian_core::rl::ToyEnv;
use seldonian_core::rng::{substream_seed, Stream};
use seldonian_core::regression::RegressionOutcome;
use seldonian_core::synthgen::{gen_illustrative, IllustrativeParams};
use seldonian_core::baselines::{sample_disc_stat, sample_mse};

use seldonian_harness::config::{Algo, ConfigError, ExperimentConfig, ExperimentKind};
use seldonian_harness::csvio::{self, CsvError};
use seldonian_harness::runner;

#[derive(Parser)]
#[command(
    name = "seldonian",
    version,
    about = "Seldonian toolkit experiment harness"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic dataset (or toy-environment episodes) as CSV.
    Synth(SynthArgs),
    /// Run one algorithm on a dataset file and print the outcome.
    Fit(FitArgs),
    /// Run a multi-trial experiment sweep.
    Experiment(ExperimentArgs),
    /// Run the RL sweep (shorthand for `experiment` with kind rl-sweep).
    RlExperiment(ExperimentArgs),
    /// Run the analytic-versus-Monte-Carlo self checks.
    OracleCheck(OracleArgs),
}

/// Flags shared by every experiment-shaped subcommand. Unset flags fall
/// back to the config file (when given) and then to the desk-scale
/// defaults.
#[derive(Args)]
struct Shared {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path (per-trial rows; aggregates go to *.summary.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Trials per grid point.
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated training-set sizes (or episode counts).
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    /// Confidence level.
    #[arg(long)]
    delta: Option<f64>,
    /// Constraint tolerance.
    #[arg(long)]
    eps: Option<f64>,
    /// Penalty weight (sclr, qndlr-lambda).
    #[arg(long)]
    lambda: Option<f64>,
    /// Algorithm.
    #[arg(long)]
    algo: Option<Algo>,
    /// Worker threads (0 = serial; any value yields identical bytes).
    #[arg(long)]
    threads: Option<usize>,
}

impl Shared {
    fn build(&self, base: ExperimentConfig) -> Result<ExperimentConfig, ConfigError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_json_file(path)?,
            None => base,
        };
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.out {
            cfg.out = v.clone();
        }
        if let Some(v) = self.trials {
            cfg.trials = v;
        }
        if let Some(v) = &self.m {
            cfg.m_values = v.clone();
        }
        if let Some(v) = self.delta {
            cfg.delta = v;
        }
        if let Some(v) = self.eps {
            cfg.eps = v;
        }
        if let Some(v) = self.lambda {
            cfg.lambda = v;
        }
        if let Some(v) = self.algo {
            cfg.algo = v;
        }
        if let Some(v) = self.threads {
            cfg.threads = v;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct SynthArgs {
    /// Rows (or episodes with --episodes).
    #[arg(long, default_value_t = 1000)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Emit toy-environment episodes (p1,p2,r,r1) instead of a dataset.
    #[arg(long)]
    episodes: bool,
}

#[derive(Args)]
struct FitArgs {
    /// Input dataset CSV (header must name y and t columns).
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment kind.
    #[arg(long)]
    kind: Option<ExperimentKind>,
    /// Comma-separated penalty grid for lambda-sweep.
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
    /// Range/barrier scale override.
    #[arg(long)]
    b: Option<f64>,
    /// Record wall-clock times (sacrifices byte-identical reruns).
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Optional report CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are successes, not usage errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(classify(&e))
        }
    }
}

/// Maps error types onto the documented exit codes.
fn classify(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<ConfigError>() || cause.is::<clap::Error>() {
            return 1;
        }
        if cause.is::<CsvError>() || cause.is::<std::io::Error>() || cause.is::<csv::Error>() {
            return 2;
        }
    }
    // Anything else came from the algorithms rejecting the data.
    2
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.cmd {
        Cmd::Synth(args) => {
            if args.episodes {
                let env = ToyEnv::<f64>::standard();
                let mut stream = Stream::from_seed(substream_seed(args.seed, 0x4550_4953));
                let episodes = env.episodes_from(&env.admissible.clone(), args.m, &mut stream)?;
                csvio::emit_episodes(&args.out, &episodes)?;
            } else {
                let d = gen_illustrative::<f64>(IllustrativeParams {
                    m: args.m,
                    seed: args.seed,
                });
                csvio::emit_dataset(&args.out, &d)?;
            }
            println!("wrote {}", args.out.display());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Fit(args) => {
            let cfg = args.shared.build(ExperimentConfig::default())?;
            cfg.validate()?;
            let data = csvio::ingest_csv(&args.data)?;
            match runner::fit_once(&data, &cfg)? {
                RegressionOutcome::Solution(theta) => {
                    println!("solution: theta = {theta:?}");
                    println!("sample mse = {}", sample_mse(&theta, &data));
                    match sample_disc_stat(&theta, &data) {
                        Ok(d) => println!("sample disc stat = {d}"),
                        Err(_) => println!("sample disc stat undefined (single-type data)"),
                    }
                }
                RegressionOutcome::NoSolutionFound(reason) => {
                    // A refusal is a sanctioned outcome, not an error.
                    println!("no solution found: {reason}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Experiment(args) => run_experiment_cmd(args, ExperimentConfig::default()),
        Cmd::RlExperiment(mut args) => {
            args.kind = Some(ExperimentKind::RlSweep);
            run_experiment_cmd(args, ExperimentConfig::rl_default())
        }
        Cmd::OracleCheck(args) => {
            let cfg = ExperimentConfig {
                kind: ExperimentKind::OracleCheck,
                seed: args.seed,
                out: args
                    .out
                    .unwrap_or_else(|| PathBuf::from("oracle-check.csv")),
                ..ExperimentConfig::default()
            };
            let report = runner::run_experiment(&cfg)?;
            let runner::ExperimentReport::Oracle { all_passed, .. } = report else {
                unreachable!("oracle-check produces an oracle report");
            };
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
    }
}

fn run_experiment_cmd(args: ExperimentArgs, base: ExperimentConfig) -> anyhow::Result<ExitCode> {
    let mut cfg = args.shared.build(base)?;
    if let Some(kind) = args.kind {
        cfg.kind = kind;
    }
    if let Some(lambdas) = args.lambdas {
        cfg.lambdas = lambdas;
    }
    if let Some(b) = args.b {
        cfg.b = Some(b);
    }
    if args.timing {
        cfg.timing = true;
    }
    let report = runner::run_experiment(&cfg)?;
    if let runner::ExperimentReport::Oracle { all_passed: false, .. } = report {
        return Ok(ExitCode::from(3));
    }
    println!(
        "wrote {} and {}",
        cfg.out.display(),
        runner::summary_path(&cfg.out).display()
    );
    Ok(ExitCode::SUCCESS)
}
