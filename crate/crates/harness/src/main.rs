use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pseudospec_harness::goldens::{check_goldens, default_dir, write_goldens};
use pseudospec_harness::{
    emit_csv, parse_config, run_experiment, ExperimentId, HarnessError, Result, THREADS_ENV,
};

#[derive(Parser)]
#[command(
    name = "pseudospec",
    version,
    about = "Spectral solvers for pseudo-parabolic problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run {
        config: PathBuf,
        /// Overrides the `output` key; without either the CSV goes to stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the registry ids.
    List,
    /// Regenerate the golden outputs, or compare against them with --check.
    Goldens {
        #[arg(long)]
        check: bool,
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

fn init_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            HarnessError::validation(
                THREADS_ENV,
                format!("expected a positive integer, got `{value}`"),
            )
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| HarnessError::validation(THREADS_ENV, e.to_string()))
}

fn execute(cli: Cli) -> Result<()> {
    init_threads()?;
    match cli.command {
        Command::Run { config, output } => {
            let text =
                std::fs::read_to_string(&config).map_err(|e| HarnessError::io(&config, e))?;
            let cfg = parse_config(&text)?;
            let table = run_experiment(&cfg)?;
            match output.or(cfg.output) {
                Some(path) => emit_csv(&table, &path)?,
                None => print!("{}", table.to_csv()),
            }
        }
        Command::List => {
            for id in ExperimentId::ALL {
                println!("{:<18} {}", id.name(), id.description());
            }
        }
        Command::Goldens { check, dir } => {
            let dir = dir.unwrap_or_else(default_dir);
            if check {
                let bad = check_goldens(&dir)?;
                if !bad.is_empty() {
                    return Err(HarnessError::GoldenMismatch(bad.join(", ")));
                }
                println!("goldens match");
            } else {
                for p in write_goldens(&dir)? {
                    println!("wrote {}", p.display());
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
