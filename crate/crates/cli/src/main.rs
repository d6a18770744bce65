use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fdsched_core::harness::{
    config_reference, format_summary, load_config, read_records_from, run_sweep, run_sweep_to_file,
    summarize, Algorithm, HarnessError, RunOptions, ScenarioSweep,
};

#[derive(Parser)]
#[command(
    name = "fdsched",
    version,
    about = "Full-duplex antenna splitting and user scheduling sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep, write one CSV row per run and print the summary.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override `sweep.realizations`.
        #[arg(long)]
        realizations: Option<usize>,
        /// Override `sweep.seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Fill the wall_ms column; reruns are then no longer byte-identical.
        #[arg(long)]
        timing: bool,
    },
    /// Run only an exhaustive search over the configured sweep.
    Oracle {
        config: PathBuf,
        #[arg(long, value_enum)]
        mode: OracleMode,
        /// Also write the rows to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        realizations: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print per-point means, standard errors and GS/ES evaluation ratios of a CSV.
    Summarize { csv: PathBuf },
    /// Parse and validate a config file.
    Validate { config: PathBuf },
    /// Print every config key with its default.
    ConfigReference,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMode {
    EsU,
    EsJ,
}

/// Exit code 1: bad input. Exit code 2: the work itself failed.
enum Failure {
    Input(String),
    Runtime(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Parse { .. } | HarnessError::Validation(_) | HarnessError::Schema(_) => {
                Failure::Input(e.to_string())
            }
            HarnessError::Io { .. } | HarnessError::Csv(_) => Failure::Runtime(e.to_string()),
        }
    }
}

fn load(
    config: &Path,
    realizations: Option<usize>,
    seed: Option<u64>,
) -> Result<ScenarioSweep, Failure> {
    let mut sweep = load_config(config).map_err(|e| match e {
        HarnessError::Io { .. } => Failure::Input(e.to_string()),
        other => other.into(),
    })?;
    if let Some(r) = realizations {
        sweep.realizations = r;
    }
    if let Some(s) = seed {
        sweep.master_seed = s;
    }
    sweep.validate()?;
    Ok(sweep)
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run {
            config,
            out,
            realizations,
            seed,
            timing,
        } => {
            let sweep = load(&config, realizations, seed)?;
            let records = run_sweep_to_file(&sweep, &out, RunOptions { timing })?;
            print!("{}", format_summary(&summarize(&records)));
            let failed = records.iter().filter(|r| !r.error.is_empty()).count();
            if failed > 0 {
                eprintln!(
                    "{failed} of {} runs failed; see the error column",
                    records.len()
                );
            }
            Ok(())
        }
        Command::Oracle {
            config,
            mode,
            out,
            realizations,
            seed,
        } => {
            let mut sweep = load(&config, realizations, seed)?;
            sweep.algorithms = vec![match mode {
                OracleMode::EsU => Algorithm::EsU,
                OracleMode::EsJ => Algorithm::EsJ,
            }];
            let records = match &out {
                Some(path) => run_sweep_to_file(&sweep, path, RunOptions::default())?,
                None => run_sweep(&sweep, RunOptions::default()),
            };
            print!("{}", format_summary(&summarize(&records)));
            match records.iter().find(|r| !r.error.is_empty()) {
                Some(r) => Err(Failure::Runtime(r.error.clone())),
                None => Ok(()),
            }
        }
        Command::Summarize { csv } => {
            let records = read_records_from(&csv).map_err(|e| match e {
                HarnessError::Io { .. } => Failure::Input(e.to_string()),
                other => other.into(),
            })?;
            print!("{}", format_summary(&summarize(&records)));
            Ok(())
        }
        Command::Validate { config } => {
            let sweep = load(&config, None, None)?;
            println!(
                "ok: {} scenario points x {} realizations x {} algorithms",
                sweep.points().len(),
                sweep.realizations,
                sweep.algorithms.len()
            );
            Ok(())
        }
        Command::ConfigReference => {
            print!("{}", config_reference());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
