//! `omqm` — the command-line laboratory for the observation-modular
//! calculus. Eight subcommands drive the core library; outputs are written
//! atomically under an output directory together with a run manifest.
//!
//! Exit status: 0 on success (discrepant ledger findings included), 1 on
//! evaluation errors, 2 on usage and configuration errors.

mod commands;
mod config;
mod emit;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    run_born, run_chaos, run_collapse, run_epr, run_numtheory, run_verify, run_weierstrass,
    run_zeros, BornArgs, ChaosArgs, CollapseArgs, EprArgs, NumtheoryArgs, VerifyArgs,
    WeierstrassArgs, ZerosArgs,
};
use config::{resolve_globals, ConfigError, FileConfig, GlobalFlags};

/// Desk-scale laboratory for the observation-modular calculus.
#[derive(Debug, Parser)]
#[command(name = "omqm", version, about, propagate_version = true)]
struct Cli {
    /// JSON config file with flat dotted keys (default: $OMQM_CONFIG).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory for result files and the run manifest.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Base RNG seed for sampling commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also emit SVG plots where the command supports them.
    #[arg(long, global = true)]
    svg: bool,
    /// Sign of the spin constant: +1 or -1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    s_tilde_sign: Option<i8>,
    /// Override the unit loop volume.
    #[arg(long, global = true)]
    alpha_tilde: Option<f64>,
    /// Override the ring dimension used in scaling reports.
    #[arg(long, global = true)]
    dimension: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Deterministic collapse of one scale by both mechanisms.
    Collapse(CollapseArgs),
    /// Sample jittered collapse statistics against the model law.
    Born(BornArgs),
    /// Entangled two-particle collapse (single setup or a batch).
    Epr(EprArgs),
    /// Tabulate the elliptic function over the fundamental cell.
    Weierstrass(WeierstrassArgs),
    /// Scan critical-line zeros and export the table.
    Zeros(ZerosArgs),
    /// Build arithmetic tables and report summary values.
    Numtheory(NumtheoryArgs),
    /// Period-doubling cascade and the chaotic attractor.
    Chaos(ChaosArgs),
    /// Evaluate the claim ledger and report every grade.
    Verify(VerifyArgs),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let file = FileConfig::resolve(cli.config.as_deref())?;
    let flags = GlobalFlags {
        seed: cli.seed,
        out_dir: cli.out_dir.clone(),
        svg: cli.svg,
        s_tilde_sign: cli.s_tilde_sign,
        alpha_tilde: cli.alpha_tilde,
        dimension: cli.dimension,
    };
    let globals = resolve_globals(&flags, &file)?;
    match &cli.command {
        Command::Collapse(args) => run_collapse(args, &globals, &file),
        Command::Born(args) => run_born(args, &globals, &file),
        Command::Epr(args) => run_epr(args, &globals),
        Command::Weierstrass(args) => run_weierstrass(args, &globals, &file),
        Command::Zeros(args) => run_zeros(args, &globals, &file),
        Command::Numtheory(args) => run_numtheory(args, &globals, &file),
        Command::Chaos(args) => run_chaos(args, &globals, &file),
        Command::Verify(args) => run_verify(args, &globals),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            let code = u8::try_from(error.exit_code()).unwrap_or(2);
            let _ = error.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) if error.is::<ConfigError>() => {
            eprintln!("config error: {error}");
            ExitCode::from(2)
        }
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(1)
        }
    }
}
