use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spde_perturb_cli::{run, Command, Options};

#[derive(Parser)]
#[command(name = "spde-perturb", version, about = "Domain-perturbation experiments for semilinear stochastic heat equations")]
struct Cli {
    /// Overrides `master_seed` from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores). Does not change any output.
    #[arg(long, global = true, env = "SPDE_PERTURB_THREADS", default_value_t = 0)]
    threads: usize,
    /// Output directory; defaults to `output_dir` from the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a config without running anything.
    Validate { config: PathBuf },
    /// Resolvent and semigroup defects on the ε-grid.
    Operators { config: PathBuf },
    /// Moment bound for the base problem.
    Simulate { config: PathBuf },
    /// Coupled convergence study and verdict.
    Converge { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, config) = match cli.command {
        Cmd::Validate { config } => (Command::Validate, config),
        Cmd::Operators { config } => (Command::Operators, config),
        Cmd::Simulate { config } => (Command::Simulate, config),
        Cmd::Converge { config } => (Command::Converge, config),
    };
    let opts = Options {
        seed: cli.seed,
        threads: cli.threads,
        out: cli.out,
    };
    match run(cmd, &config, &opts) {
        Ok(outcome) => {
            for line in &outcome.diagnostics {
                println!("{line}");
            }
            if outcome.manifest.is_some() {
                println!("wrote {}", outcome.out_dir.display());
            } else {
                println!("{}: ok", config.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
