//! Command-line front end: `gen`, `validate`, `facets`, `bench`.
//!
//! Exit codes: 0 on success, 1 when validation finds a violation, 2 for
//! usage, configuration and I/O problems.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use quasistrip::cli::{self, RunConfig};

#[derive(Parser)]
#[command(name = "quasistrip", version, about = "Quasiperiodic point sets from covering clusters")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point set and write it in the configured format.
    Gen {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-generate and check covering, dedupe and symmetry properties.
    Validate {
        #[arg(long)]
        config: PathBuf,
        /// Also compare strip membership against the independent window
        /// oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Print the facet-family summary for the configured cluster.
    Facets {
        #[arg(long)]
        config: PathBuf,
    },
    /// Time a full generation run.
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load_config(path: &PathBuf) -> Result<RunConfig, quasistrip::Error> {
    let text = std::fs::read_to_string(path)?;
    cli::parse_config(&text)
}

fn run() -> Result<bool, quasistrip::Error> {
    let args = Args::parse();
    let mut stdout = std::io::stdout().lock();
    match args.command {
        Command::Gen { config, out } => {
            let cfg = load_config(&config)?;
            let written = cli::cmd_gen(&cfg, out.as_deref(), &mut std::io::stderr().lock())?;
            eprintln!("wrote {written} points");
            Ok(true)
        }
        Command::Validate { config, oracle } => {
            let cfg = load_config(&config)?;
            cli::cmd_validate(&cfg, oracle, &mut stdout)
        }
        Command::Facets { config } => {
            let cfg = load_config(&config)?;
            cli::cmd_facets(&cfg, &mut stdout)?;
            Ok(true)
        }
        Command::Bench { config } => {
            let cfg = load_config(&config)?;
            cli::cmd_bench(&cfg, &mut stdout)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
