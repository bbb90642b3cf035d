use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lpma::acceptance;
use lpma::harness::{run_experiment, run_pairing_study, ExperimentConfig, PairingStudyConfig};

/// Lattice partition multiple access simulator.
#[derive(Debug, Parser)]
#[command(name = "lpma", version = env!("LPMA_GIT_DESCRIBE"))]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a Monte Carlo throughput campaign.
    Simulate(RunArgs),
    /// Random pairing degradation study (built-in defaults without --config).
    PairingStudy(RunArgs),
    /// Run the acceptance checks.
    Acceptance,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Experiment TOML file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path stem; writes <stem>.csv and <stem>.json. Without it the
    /// CSV goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the configured trial count.
    #[arg(long)]
    trials: Option<u64>,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    parallel: Option<usize>,
}

fn simulate(args: RunArgs) -> lpma::Result<()> {
    let path = args
        .config
        .ok_or_else(|| lpma::Error::Config("simulate needs --config <path>".into()))?;
    let mut cfg = ExperimentConfig::from_file(&path)?;
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.trials = args.trials.unwrap_or(cfg.trials);
    cfg.parallel = args.parallel.or(cfg.parallel);
    let out = args.out.or(cfg.output.as_ref().map(PathBuf::from));
    let report = run_experiment(&cfg)?;
    match out {
        Some(stem) => {
            let (csv, json) = report.write(&stem)?;
            eprintln!("wrote {} and {}", csv.display(), json.display());
        }
        None => print!("{}", report.to_csv()),
    }
    Ok(())
}

fn pairing_study(args: RunArgs) -> lpma::Result<()> {
    let mut cfg = match &args.config {
        Some(path) => PairingStudyConfig::from_file(path)?,
        None => PairingStudyConfig::default(),
    };
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.trials = args.trials.unwrap_or(cfg.trials);
    cfg.parallel = args.parallel.or(cfg.parallel);
    let report = run_pairing_study(&cfg)?;
    match args.out {
        Some(stem) => {
            let (csv, json) = report.write(&stem)?;
            eprintln!("wrote {} and {}", csv.display(), json.display());
        }
        None => {
            println!("noma_degradation_rate,{}", report.noma_degradation_rate);
            println!("lpma_degradation_rate,{}", report.lpma_degradation_rate);
            print!("{}", report.to_csv());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::PairingStudy(args) => pairing_study(args),
        Command::Acceptance => {
            let outcomes = acceptance::run_all();
            for o in &outcomes {
                println!("{o}");
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!("{} of {} checks passed", outcomes.len() - failed, outcomes.len());
            return if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(2) };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
