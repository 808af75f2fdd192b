use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qdent_cli::commands::{self, Overrides};
use qdent_cli::{CliError, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "qdent",
    version,
    about = "Photon-mediated entanglement and tomography of two quantum-dot spins"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; defaults apply to absent fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Cross-check results against closed forms; exit 3 on mismatch.
    #[arg(long, global = true)]
    verify: bool,
    /// Shots per tomography setting, or boosting trajectories.
    #[arg(long, global = true)]
    shots: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Outcome probabilities and conditional states after one photon.
    Entangle,
    /// Entanglement and fidelities against total dephasing time.
    Figure1,
    /// Full two-spin tomography with probe photons.
    Tomography,
    /// Outcome probabilities, coefficient drift and boosting under relaxation.
    Relaxation,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let overrides = Overrides {
        format: cli.format,
        verify: cli.verify,
        shots: cli.shots,
        seed: cli.seed,
    };
    let text = match cli.command {
        Command::Entangle => commands::entangle(&config, &overrides)?,
        Command::Figure1 => commands::figure1(&config, &overrides)?,
        Command::Tomography => commands::tomography(&config, &overrides)?,
        Command::Relaxation => commands::relaxation(&config, &overrides)?,
    };
    let out = cli.out.as_deref().or(config.output.path.as_deref());
    qdent_cli::output::emit(&text, out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
