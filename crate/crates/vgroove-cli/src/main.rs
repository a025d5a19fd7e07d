//! vgroove: design and simulation toolchain for silicon V-groove fiber
//! platforms.
//!
//! Exit codes: 0 success / clean validation, 1 domain or validation
//! failure, 2 usage error or malformed input. Failures print a single
//! machine-parseable JSON line to stderr.

// Validators use `!(x > 0.0)` so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod errors;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Ctx, OutputFormat};

#[derive(Debug, Parser)]
#[command(
    name = "vgroove",
    version,
    about = "Silicon V-groove fiber platform toolkit"
)]
struct Cli {
    /// Input configuration JSON; each subcommand documents its schema
    /// (platform config for trace/budget/plan-etch, EtchConfig for
    /// simulate-etch).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory all artifacts are written into.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Stdout/artifact format for record-like results.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Design the groove that seats a fiber and check the seating.
    Design(commands::design::DesignArgs),
    /// Fit an Arrhenius etch-rate model from a measurement CSV.
    FitRates(commands::fit_rates::FitRatesArgs),
    /// Plan the etch time to a target depth.
    PlanEtch(commands::plan_etch::PlanEtchArgs),
    /// Run the 2-D etch-front simulation.
    SimulateEtch(commands::simulate_etch::SimulateEtchArgs),
    /// Trace the excitation beam across the micro-mirror.
    Trace(commands::trace::TraceArgs),
    /// Fit the detector capture factor from reflectivity measurements.
    Budget(commands::budget::BudgetArgs),
    /// Validate a process recipe or render its traveler.
    Recipe {
        #[command(subcommand)]
        command: commands::recipe_cmd::RecipeCommand,
    },
    /// Re-derive the reference numbers and print a pass/fail table.
    Reproduce(commands::reproduce::ReproduceArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        out_dir: cli.out,
        format: cli.format,
        config: cli.config,
    };
    let result = match &cli.command {
        Command::Design(args) => commands::design::run(&ctx, args).map(|()| ExitCode::SUCCESS),
        Command::FitRates(args) => commands::fit_rates::run(&ctx, args).map(|()| ExitCode::SUCCESS),
        Command::PlanEtch(args) => commands::plan_etch::run(&ctx, args).map(|()| ExitCode::SUCCESS),
        Command::SimulateEtch(args) => {
            commands::simulate_etch::run(&ctx, args).map(|()| ExitCode::SUCCESS)
        }
        Command::Trace(args) => commands::trace::run(&ctx, args).map(|()| ExitCode::SUCCESS),
        Command::Budget(args) => commands::budget::run(&ctx, args).map(|()| ExitCode::SUCCESS),
        Command::Recipe { command } => commands::recipe_cmd::run(&ctx, command),
        Command::Reproduce(args) => {
            commands::reproduce::run(&ctx, args).map(|status| match status {
                commands::reproduce::ExitStatus::Clean => ExitCode::SUCCESS,
                commands::reproduce::ExitStatus::RowsFailed => ExitCode::from(1),
            })
        }
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{}", err.stderr_line());
            err.exit_code()
        }
    }
}
