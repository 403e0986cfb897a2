use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use collisim_cli::{default_threads, report, run_experiment, thread_pool, CliError, ExperimentConfig, Format, Task};

/// Simulate collision-based randomized-measurement experiments.
#[derive(Parser, Debug)]
#[command(name = "collisim", version)]
struct Args {
    /// What to estimate.
    #[arg(value_enum)]
    task: Task,
    /// TOML experiment description.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads. Defaults to $COLLISIM_THREADS, then to the core count.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn run(args: Args) -> Result<(), CliError> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(t) = cfg.task {
        if t != args.task {
            return Err(CliError::Config(format!(
                "config is for task {} but {} was requested",
                t.name(),
                args.task.name()
            )));
        }
    }
    let format = args.format.or(cfg.output.format).unwrap_or(Format::Csv);
    let out = args.out.or_else(|| cfg.output.path.clone());
    let pool = thread_pool(default_threads(args.threads))?;
    let rep = run_experiment(&cfg, args.task, &pool)?;
    report::write_outputs(&rep, format, out.as_deref())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("collisim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
