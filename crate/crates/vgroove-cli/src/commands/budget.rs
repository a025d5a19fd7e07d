//! `budget`: fit the capture factor from measured (P1, P2) pairs.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use vgroove::optics::{
    fit_capture_factor, power_budget, CaptureFit, MirrorSpec, PowerBudget, PowerMeasurement,
};

use super::{read_file, Ctx};
use crate::config::PlatformConfig;
use crate::errors::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Measurement CSV with header `p1_uw,p2_uw`.
    #[arg(long)]
    pub csv: PathBuf,
    /// Mirror finish when no platform config is given.
    #[arg(long, default_value = "al", value_parser = ["al", "bare-si"])]
    pub mirror: String,
    /// Facet roughness Ra, nm.
    #[arg(long, default_value_t = 4.1)]
    pub ra_nm: f64,
    /// Source wavelength, nm.
    #[arg(long, default_value_t = 632.0)]
    pub wavelength_nm: f64,
}

#[derive(Debug, Serialize)]
struct BudgetOutput {
    fit: CaptureFit,
    mirror: MirrorSpec,
    wavelength_nm: f64,
    measurement_count: usize,
    /// Budget for 1 µW input at the fitted capture factor.
    unit_budget: PowerBudget,
}

pub fn read_measurement_csv(text: &str, origin: &str) -> CliResult<Vec<PowerMeasurement>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.iter().ne(["p1_uw", "p2_uw"]) {
        return Err(CliError::Malformed(format!(
            "{origin}: expected header `p1_uw,p2_uw`, got `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut measurements = Vec::new();
    for record in reader.deserialize() {
        let m: PowerMeasurement =
            record.map_err(|e| CliError::Malformed(format!("{origin}: {e}")))?;
        measurements.push(m);
    }
    Ok(measurements)
}

pub fn run(ctx: &Ctx, args: &BudgetArgs) -> CliResult<()> {
    let (mirror, wavelength, fiber) = match &ctx.config {
        Some(path) => {
            let config = PlatformConfig::load(path)?;
            (
                config.mirror.clone(),
                config.fiber.wavelength_nm,
                Some(config.fiber),
            )
        }
        None => {
            let mut mirror = match args.mirror.as_str() {
                "al" => MirrorSpec::aluminum_coated(),
                _ => MirrorSpec::bare_silicon(),
            };
            mirror.roughness_ra_nm = args.ra_nm;
            (mirror, args.wavelength_nm, None)
        }
    };

    let text = read_file(&args.csv)?;
    let measurements = read_measurement_csv(&text, &args.csv.display().to_string())?;
    let fit = fit_capture_factor(&measurements, &mirror, wavelength)?;

    let fiber = fiber.unwrap_or_else(|| {
        let mut f = vgroove::geometry::FiberSpec::default_multimode();
        f.wavelength_nm = wavelength;
        f
    });
    let unit_budget = power_budget(&fiber, &mirror, fit.capture_factor, 1.0)?;

    let output = BudgetOutput {
        measurement_count: measurements.len(),
        fit,
        mirror,
        wavelength_nm: wavelength,
        unit_budget,
    };
    ctx.emit("budget_fit", &output)
}
