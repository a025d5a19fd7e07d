//! `design`: closed-form groove for a fiber, plus the seating check.

use clap::Args;
use serde::Serialize;
use vgroove::geometry::{
    design_groove, fiber_seating, self_limit_depth, FiberSpec, GrooveDesign, Seating,
};

use super::Ctx;
use crate::errors::CliResult;

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// Bare-fiber cladding radius, µm.
    #[arg(long, default_value_t = 62.5)]
    pub fiber_radius_um: f64,
    /// Fiber numerical aperture.
    #[arg(long, default_value_t = 0.275)]
    pub na: f64,
    /// Source wavelength, nm.
    #[arg(long, default_value_t = 632.0)]
    pub wavelength_nm: f64,
    /// Extra mask width beyond the geometric minimum, µm.
    #[arg(long, default_value_t = 0.0)]
    pub margin_um: f64,
    /// Fiber core radius, µm (default: half the cladding radius).
    #[arg(long)]
    pub core_radius_um: Option<f64>,
}

#[derive(Debug, Serialize)]
struct DesignOutput {
    fiber: FiberSpec,
    groove: GrooveDesign,
    /// Mask opening before margin, µm.
    min_opening_um: f64,
    /// Deepest etch the designed mask allows, µm.
    self_limit_depth_um: f64,
    seating: Seating,
}

pub fn run(ctx: &Ctx, args: &DesignArgs) -> CliResult<()> {
    let fiber = FiberSpec {
        radius_um: args.fiber_radius_um,
        numerical_aperture: args.na,
        wavelength_nm: args.wavelength_nm,
        core_radius_um: args.core_radius_um,
    };
    fiber.validate()?;
    let groove = design_groove(&fiber, args.margin_um)?;
    let seating = fiber_seating(&groove, &fiber)?;
    let output = DesignOutput {
        min_opening_um: groove.mask_opening_um - groove.margin_um,
        self_limit_depth_um: self_limit_depth(groove.mask_opening_um)?,
        fiber,
        groove,
        seating,
    };
    ctx.emit("design", &output)
}
