//! `dilatia` — runs the state-preparation study, the dephasing and damping
//! dynamics sweeps, or the operator decomposition inspector.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use dilatia::config::{Experiment, ExperimentConfig, Mode, PartialConfig};
use dilatia::decompose::{run_decompose, DecomposeOptions};
use dilatia::dynamics::{run_damping, run_dephasing};
use dilatia::prep::run_prep_experiment;
use dilatia::CliResult;

#[derive(Parser)]
#[command(name = "dilatia", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prepare random sub-normalized states and tabulate tomography errors
    Prep(RunArgs),
    /// Sweep a pure dephasing channel from |+> and record the coherence
    Dephasing(RunArgs),
    /// Sweep an amplitude damping channel from a mixed state
    Damping(RunArgs),
    /// Decompose one operator into dilated diagonal gates
    Decompose(DecomposeArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration file (fields mirror the documented config schema)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Random seed override
    #[arg(long)]
    seed: Option<u64>,
    /// Shot count override; repeat the flag for a schedule
    #[arg(long = "shots", conflicts_with = "exact")]
    shots: Vec<u64>,
    /// Use exact probabilities instead of sampled measurements
    #[arg(long)]
    exact: bool,
    /// Output directory for CSV and SVG files
    #[arg(long = "out")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    /// JSON configuration file (only output_dir applies here)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Operator file: matrix rows, or a single row treated as a diagonal
    #[arg(long)]
    input: PathBuf,
    /// Walsh truncation threshold for an additional approximate synthesis
    #[arg(long)]
    epsilon: Option<f64>,
    /// Write the lowered circuit as OpenQASM
    #[arg(long)]
    qasm: bool,
    /// Divide an over-unity operator by its largest singular value
    #[arg(long)]
    rescale: bool,
    /// Output directory for QASM files
    #[arg(long = "out")]
    out: Option<PathBuf>,
}

fn load_partial(path: &Option<PathBuf>) -> CliResult<PartialConfig> {
    match path {
        Some(path) => PartialConfig::from_json(&fs::read_to_string(path)?),
        None => Ok(PartialConfig::default()),
    }
}

fn resolve(args: &RunArgs, experiment: Experiment) -> CliResult<ExperimentConfig> {
    let mut partial = load_partial(&args.config)?;
    if let Some(seed) = args.seed {
        partial.seed = Some(seed);
    }
    if !args.shots.is_empty() {
        partial.shots = Some(args.shots.clone());
        partial.mode = Some(Mode::Shots);
    }
    if args.exact {
        partial.mode = Some(Mode::Exact);
    }
    if let Some(out) = &args.out {
        partial.output_dir = Some(out.clone());
    }
    partial.resolve(experiment)
}

fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Prep(args) => {
            let cfg = resolve(&args, Experiment::Prep)?;
            run_prep_experiment(&cfg)?;
            Ok(format!(
                "wrote {}",
                cfg.output_dir.join("table1.csv").display()
            ))
        }
        Command::Dephasing(args) => {
            let cfg = resolve(&args, Experiment::Dephasing)?;
            run_dephasing(&cfg)?;
            Ok(format!(
                "wrote {}, fig3_coherence.svg, fig4_bloch.svg",
                cfg.output_dir.join("dephasing.csv").display()
            ))
        }
        Command::Damping(args) => {
            let cfg = resolve(&args, Experiment::Damping)?;
            run_damping(&cfg)?;
            Ok(format!(
                "wrote {}, fig5_damping.svg",
                cfg.output_dir.join("damping.csv").display()
            ))
        }
        Command::Decompose(args) => {
            let partial = load_partial(&args.config)?;
            let output_dir = args
                .out
                .clone()
                .or(partial.output_dir)
                .unwrap_or_else(|| PathBuf::from("."));
            let outcome = run_decompose(&DecomposeOptions {
                input: args.input,
                epsilon: args.epsilon,
                write_qasm: args.qasm,
                auto_rescale: args.rescale,
                output_dir,
            })?;
            Ok(outcome.summary().to_string())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(summary) => println!("{summary}"),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
