mod commands;
mod config;
mod error;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nanofiber_core::{Direction, MainPolarization, ModeId};

use crate::commands::MapKind;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "nanofiber", version, about = "Nanofiber guided modes, chiral emission and cylinder scattering")]
struct Cli {
    /// JSON run configuration; defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the payload here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Silence diagnostics on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Print the default configuration and exit.
    #[arg(long)]
    dump_default_config: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeP {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeD {
    #[value(name = "+z")]
    PlusZ,
    #[value(name = "-z")]
    MinusZ,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the HE11 dispersion relation.
    Solve,
    /// Write a CSV map of intensity, polarization overlaps and spin.
    Map {
        #[arg(long, value_enum)]
        kind: MapKind,
        /// Main polarization of the guided mode (overrides the config).
        #[arg(long, value_enum)]
        mode_p: Option<ModeP>,
        /// Propagation direction of the guided mode (overrides the config).
        #[arg(long, value_enum, allow_hyphen_values = true)]
        mode_d: Option<ModeD>,
    },
    /// Directional emission fractions for every configured state and site.
    Emission,
    /// Photon-counting simulation for the first configured site and state.
    Simulate {
        /// RNG seed (overrides the config).
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn log(quiet: bool, msg: &str) {
    if !quiet {
        eprintln!("{msg}");
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    if cli.dump_default_config {
        return emit(cli, &cli.out, format!("{}\n", RunConfig::default().to_json()));
    }
    let Some(command) = &cli.command else {
        return Err(CliError::Config("no subcommand given (try --help)".into()));
    };
    let cfg = match &cli.config {
        Some(path) => {
            log(cli.quiet, &format!("reading {}", path.display()));
            RunConfig::load(path)?
        }
        None => RunConfig::default(),
    };
    let payload = match command {
        Command::Solve => commands::solve(&cfg)?,
        Command::Map { kind, mode_p, mode_d } => {
            let mut mode = cfg.mode;
            if let Some(p) = mode_p {
                mode.p = match p {
                    ModeP::X => MainPolarization::X,
                    ModeP::Y => MainPolarization::Y,
                };
            }
            if let Some(d) = mode_d {
                mode.d = match d {
                    ModeD::PlusZ => Direction::PlusZ,
                    ModeD::MinusZ => Direction::MinusZ,
                };
            }
            log(cli.quiet, &format!("{kind:?} map on {}x{} nodes", cfg.grid.nx, cfg.grid.ny));
            commands::map(&cfg, *kind, ModeId::new(mode.p, mode.d))?
        }
        Command::Emission => commands::emission(&cfg)?,
        Command::Simulate { seed } => commands::simulate(&cfg, *seed)?,
    };
    let out = cli.out.clone().or_else(|| cfg.output.path.clone());
    emit(cli, &out, payload)
}

fn emit(cli: &Cli, out: &Option<PathBuf>, payload: String) -> CliResult<()> {
    match out {
        Some(path) => {
            fs::write(path, payload)?;
            log(cli.quiet, &format!("wrote {}", path.display()));
        }
        None => io::stdout().lock().write_all(payload.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log(cli.quiet, &format!("error: {e}"));
            e.exit_code()
        }
    }
}
