//! `fit-rates`: Arrhenius fit from a measured rate CSV.

use std::path::PathBuf;

use clap::Args;
use vgroove::kinetics::{fit_arrhenius, RatePoint};

use super::{read_file, Ctx};
use crate::errors::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct FitRatesArgs {
    /// CSV with header `temp_c,rate_um_min`, one point per row.
    #[arg(long)]
    pub csv: PathBuf,
    /// Validity window, °C, as `lo,hi`.
    #[arg(long, default_value = "30,100", value_parser = parse_window)]
    pub window_c: (f64, f64),
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected lo,hi".into());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    if lo >= hi {
        return Err(format!("window low {lo} must be below high {hi}"));
    }
    Ok((lo, hi))
}

pub fn read_rate_csv(text: &str, origin: &str) -> CliResult<Vec<RatePoint>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.iter().ne(["temp_c", "rate_um_min"]) {
        return Err(CliError::Malformed(format!(
            "{origin}: expected header `temp_c,rate_um_min`, got `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut points = Vec::new();
    for record in reader.deserialize() {
        let point: RatePoint = record.map_err(|e| CliError::Malformed(format!("{origin}: {e}")))?;
        points.push(point);
    }
    Ok(points)
}

pub fn run(ctx: &Ctx, args: &FitRatesArgs) -> CliResult<()> {
    let text = read_file(&args.csv)?;
    let points = read_rate_csv(&text, &args.csv.display().to_string())?;
    let mut model = fit_arrhenius(&points)?;
    model.window_c = args.window_c;
    ctx.emit("model", &model)
}
