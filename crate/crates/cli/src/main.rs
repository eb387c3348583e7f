use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sphere_rigidity::commands::{run, Command, Outcome, RunConfig};
use sphere_rigidity::CliError;

/// Finite-grid verification of isometry rigidity for positive unit spheres
/// of sup-normed function spaces.
#[derive(Parser)]
#[command(name = "sphere-rigidity", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// Size cap on the grid sphere (overrides SPHERE_RIGIDITY_CAP).
    #[arg(long)]
    cap: Option<usize>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArg {
    /// Oracle JSON file.
    #[arg(required_unless_present = "oracle_flag", conflicts_with = "oracle_flag")]
    oracle: Option<PathBuf>,
    #[arg(long = "oracle", id = "oracle_flag", value_name = "ORACLE")]
    oracle_flag: Option<PathBuf>,
}

impl OracleArg {
    fn path(self) -> PathBuf {
        self.oracle.or(self.oracle_flag).expect("clap enforces one of the two")
    }
}

#[derive(Subcommand)]
enum Sub {
    /// Check the finite statements on the grid sphere of n points at resolution 1/m.
    VerifyLemmas {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
        /// Seed for the sampled linear-extension suite.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Verify an oracle and recover its point map.
    Extract {
        #[command(flatten)]
        oracle: OracleArg,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate every self-isometry of a small grid sphere.
    Bruteforce {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
        /// Exit 0 even if exotic isometries are found.
        #[arg(long)]
        allow_exotic: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Test the norm-pair phase condition and its consequences on an oracle.
    PhaseCheck {
        #[command(flatten)]
        oracle: OracleArg,
        #[command(flatten)]
        common: Common,
    },
}

fn config(sub: Sub) -> RunConfig {
    let (command, common, seed) = match sub {
        Sub::VerifyLemmas { n, m, seed, common } => (Command::VerifyLemmas { n, m }, common, seed),
        Sub::Extract { oracle, common } => (Command::Extract { oracle: oracle.path() }, common, 0),
        Sub::Bruteforce { n, m, allow_exotic, common } => (Command::Bruteforce { n, m, allow_exotic }, common, 0),
        Sub::PhaseCheck { oracle, common } => (Command::PhaseCheck { oracle: oracle.path() }, common, 0),
    };
    RunConfig { command, cap: common.cap, out: common.out, jobs: common.jobs, seed }
}

fn emit(config: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    if outcome.output.is_empty() {
        return Ok(());
    }
    match &config.out {
        Some(path) => std::fs::write(path, &outcome.output)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => std::io::stdout()
            .write_all(outcome.output.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = config(cli.command);
    if config.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    let mut outcome = run(&config);
    if let Err(e) = emit(&config, &outcome) {
        outcome = Outcome::from_error(&e);
    }
    if let Some(message) = &outcome.error {
        eprintln!("error: {message}");
    }
    ExitCode::from(outcome.code as u8)
}
