//! `recipe validate` and `recipe traveler`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Subcommand;
use serde::{Deserialize, Serialize};
use vgroove::kinetics::EtchRateModel;
use vgroove::recipe::{
    render_traveler, validate_bond, validate_flow, BondRecipe, ProcessStep, ValidationOptions,
    ValidationReport,
};

use super::{read_json, Ctx};
use crate::errors::{CliError, CliResult};

#[derive(Debug, Subcommand)]
pub enum RecipeCommand {
    /// Check a recipe file; exit 0 clean, 1 violations, 2 malformed.
    Validate { file: PathBuf },
    /// Render the process traveler for a validated recipe.
    Traveler {
        file: PathBuf,
        /// Render even when validation reports violations.
        #[arg(long)]
        force: bool,
    },
}

/// Recipe file: the flow, the bond schedule, and optional overrides.
#[derive(Debug, Serialize, Deserialize)]
pub struct RecipeFile {
    pub flow: Vec<ProcessStep>,
    pub bond: BondRecipe,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub options: Option<ValidationOptions>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kinetics_model: Option<EtchRateModel>,
}

fn load(path: &Path) -> CliResult<(RecipeFile, EtchRateModel, ValidationOptions)> {
    let file: RecipeFile = read_json(path)?;
    let model = file
        .kinetics_model
        .clone()
        .unwrap_or_else(EtchRateModel::default_koh_40wt);
    let options = file.options.clone().unwrap_or_default();
    Ok((file, model, options))
}

fn full_report(
    file: &RecipeFile,
    model: &EtchRateModel,
    options: &ValidationOptions,
) -> ValidationReport {
    let mut report = validate_flow(&file.flow, model);
    report.extend(validate_bond(&file.bond, options));
    report
}

pub fn run(ctx: &Ctx, command: &RecipeCommand) -> CliResult<ExitCode> {
    match command {
        RecipeCommand::Validate { file } => {
            let (recipe, model, options) = load(file)?;
            let report = full_report(&recipe, &model, &options);
            ctx.emit("validation_report", &report)?;
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        RecipeCommand::Traveler { file, force } => {
            let (recipe, model, options) = load(file)?;
            let report = full_report(&recipe, &model, &options);
            if !report.passed() && !force {
                // Hand the caller the report before refusing.
                let text = serde_json::to_string_pretty(&report).map_err(CliError::from)?;
                println!("{text}");
                return Err(CliError::Domain(format!(
                    "validation failed with {} violation(s); re-run with --force to render anyway",
                    report.violations.len()
                )));
            }
            let traveler = render_traveler(&recipe.flow, &recipe.bond, &model, &options, *force)?;
            let path = ctx.write_artifact("traveler.md", &traveler)?;
            print!("{traveler}");
            eprintln!(
                "{}",
                serde_json::json!({"artifact": path.display().to_string()})
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}
