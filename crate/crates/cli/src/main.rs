//! `uqhyp`: runs the preset experiments and writes CSV tables and JSON
//! reports.
//!
//! Exit codes: 0 success, 2 config error, 3 unrecoverable numerical state,
//! 4 I/O error.

mod commands;
mod config;
mod error;
mod output;

use clap::{Args, Parser, Subcommand};
use commands::Context;
use config::ExperimentConfig;
use error::CliError;
use std::path::PathBuf;
use std::process::ExitCode;
use uqhyp::solver::Scheme;

#[derive(Parser)]
#[command(name = "uqhyp", version, about = "Uncertain hyperbolic conservation law experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single runs with field, moments and report output.
    Run(Common),
    /// Error and order table over a sweep.
    Convergence(Common),
    /// Total variation comparison of schemes.
    Tvstudy(Common),
}

#[derive(Args)]
struct Common {
    /// JSON experiment config.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory, overrides `output_dir` of the config.
    #[arg(long, value_name = "DIR")]
    output: Option<PathBuf>,
    /// Use the large meshes of the original experiments.
    #[arg(long)]
    paper_scale: bool,
    /// Scheme to run (sg, wenosg, weno2d); repeatable, overrides the config.
    #[arg(long = "scheme", value_name = "NAME", value_parser = parse_scheme)]
    schemes: Vec<Scheme>,
    /// No progress output on stderr.
    #[arg(long)]
    quiet: bool,
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    Scheme::parse(s).ok_or_else(|| format!("unknown scheme '{s}' (expected sg, wenosg or weno2d)"))
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("UQHYP_THREADS") else {
        return Ok(());
    };
    let threads = value
        .parse::<usize>()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(vec![format!("UQHYP_THREADS = '{value}' is not a positive integer")]))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Validation(vec![e.to_string()]))
}

type Handler = fn(&Context) -> Result<(), CliError>;

fn execute(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let (args, command): (&Common, Handler) = match &cli.command {
        Command::Run(a) => (a, commands::run),
        Command::Convergence(a) => (a, commands::convergence),
        Command::Tvstudy(a) => (a, commands::tvstudy),
    };
    let mut config = ExperimentConfig::load(&args.config, args.paper_scale)?;
    if !args.schemes.is_empty() {
        config.schemes = Some(args.schemes.clone());
    }
    let output = args
        .output
        .clone()
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&output).map_err(CliError::io(&output))?;
    command(&Context {
        config: &config,
        output: &output,
        quiet: args.quiet,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
