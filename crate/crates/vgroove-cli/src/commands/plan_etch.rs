//! `plan-etch`: time to a target depth at a bath temperature.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use vgroove::geometry::self_limit_depth;
use vgroove::kinetics::EtchRateModel;

use super::{read_json, Ctx};
use crate::errors::CliResult;

#[derive(Debug, Args)]
pub struct PlanEtchArgs {
    /// Target etch depth, µm.
    #[arg(long)]
    pub target_depth_um: f64,
    /// Bath temperature, °C.
    #[arg(long)]
    pub temp_c: f64,
    /// Mask opening, µm (sets the reachable self-limit).
    #[arg(long)]
    pub mask_opening_um: f64,
    /// Fitted model JSON (default: the shipped 40 wt% KOH model).
    #[arg(long)]
    pub model: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct EtchPlan {
    target_depth_um: f64,
    temp_c: f64,
    mask_opening_um: f64,
    self_limit_depth_um: f64,
    rate_um_min: f64,
    duration_min: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    extrapolation_warning: Option<String>,
}

pub fn run(ctx: &Ctx, args: &PlanEtchArgs) -> CliResult<()> {
    let model: EtchRateModel = match (&args.model, &ctx.config) {
        (Some(path), _) => read_json(path)?,
        (None, Some(config_path)) => {
            crate::config::PlatformConfig::load(config_path)?.kinetics(config_path)?
        }
        (None, None) => EtchRateModel::default_koh_40wt(),
    };
    let duration = model.plan_etch(args.target_depth_um, args.temp_c, args.mask_opening_um)?;
    let estimate = model.rate_at(args.temp_c)?;
    let plan = EtchPlan {
        target_depth_um: args.target_depth_um,
        temp_c: args.temp_c,
        mask_opening_um: args.mask_opening_um,
        self_limit_depth_um: self_limit_depth(args.mask_opening_um)?,
        rate_um_min: estimate.rate_um_min,
        duration_min: duration,
        extrapolation_warning: estimate.extrapolation_warning,
    };
    ctx.emit("etch_plan", &plan)
}
