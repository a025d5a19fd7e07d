//! `simulate-etch`: run the etch-front simulation, export CSV + SVG.

use std::fmt::Write as _;

use clap::Args;
use serde::Serialize;
use vgroove::etchsim::{profile_metrics, simulate_profile, wall_angle, EtchConfig, EtchProfile};

use super::{read_json, Ctx};
use crate::errors::CliResult;
use crate::svg::{Mapper, SvgDoc};

#[derive(Debug, Args)]
pub struct SimulateEtchArgs {
    /// Number of snapshots rendered into the SVG.
    #[arg(long, default_value_t = 8)]
    pub svg_snapshots: usize,
}

#[derive(Debug, Serialize)]
struct SimulationSummary {
    config: EtchConfig,
    snapshot_count: usize,
    final_time_min: f64,
    depth_um: f64,
    top_width_um: f64,
    undercut_um: f64,
    removed_area_um2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_angle_deg: Option<f64>,
    artifacts: Vec<String>,
}

pub fn profile_csv(profile: &EtchProfile) -> String {
    let mut out = String::from("t_min,x_um,depth_um\n");
    for (i, t) in profile.timestamps_min.iter().enumerate() {
        for p in &profile.surfaces[i] {
            let _ = writeln!(out, "{t},{},{}", p.x, -p.y);
        }
    }
    out
}

pub fn profile_svg(profile: &EtchProfile, snapshots: usize) -> String {
    let (px_w, px_h) = (860.0, 520.0);
    let mut doc = SvgDoc::new(px_w, px_h);

    let max_depth = profile
        .surfaces
        .iter()
        .flatten()
        .map(|p| -p.y)
        .fold(1.0, f64::max);
    let x_max = profile
        .surfaces
        .first()
        .and_then(|s| s.last())
        .map(|p| p.x)
        .unwrap_or(profile.mask_opening_um);
    let map = Mapper {
        x0: -x_max,
        x1: x_max,
        y0: -0.15 * max_depth,
        y1: 1.1 * max_depth,
        px_w,
        px_h,
        margin: 40.0,
    };

    // Mask bars on the wafer surface.
    let half = profile.mask_opening_um / 2.0;
    doc.line(map.map(-x_max, 0.0), map.map(-half, 0.0), "#444444", 4.0);
    doc.line(map.map(half, 0.0), map.map(x_max, 0.0), "#444444", 4.0);
    doc.text(map.map(-x_max, -0.08 * max_depth), 12.0, "mask");

    // Evenly chosen snapshots, always including first and last.
    let n = profile.surfaces.len();
    let count = snapshots.clamp(2, n.max(2));
    let mut indices: Vec<usize> = (0..count)
        .map(|i| i * (n - 1) / (count - 1).max(1))
        .collect();
    indices.dedup();
    for (rank, &i) in indices.iter().enumerate() {
        let shade = 200 - (rank * 160 / indices.len().max(1)) as u8;
        let color = format!("#{shade:02x}{shade:02x}{shade:02x}");
        let pts: Vec<(f64, f64)> = profile.surfaces[i]
            .iter()
            .map(|p| map.map(p.x, -p.y))
            .collect();
        doc.polyline(&pts, &color, 1.2);
        let label = format!("t = {:.1} min", profile.timestamps_min[i]);
        doc.text((px_w - 180.0, 30.0 + 16.0 * rank as f64), 11.0, &label);
    }
    doc.text(
        map.map(0.0, 1.05 * max_depth),
        12.0,
        &format!("mask opening {} um", profile.mask_opening_um),
    );
    doc.finish()
}

pub fn run(ctx: &Ctx, args: &SimulateEtchArgs) -> CliResult<()> {
    let config: EtchConfig = read_json(ctx.require_config("simulate-etch")?)?;
    let profile = simulate_profile(&config)?;
    let t_end = *profile.timestamps_min.last().unwrap();
    let metrics = profile_metrics(&profile, t_end)?;
    let angle = wall_angle(&profile, t_end).ok().map(|a| a.to_degrees());

    let csv_path = ctx.write_artifact("profile.csv", &profile_csv(&profile))?;
    let svg_path = ctx.write_artifact("profile.svg", &profile_svg(&profile, args.svg_snapshots))?;

    let summary = SimulationSummary {
        config,
        snapshot_count: profile.timestamps_min.len(),
        final_time_min: t_end,
        depth_um: metrics.depth_um,
        top_width_um: metrics.top_width_um,
        undercut_um: metrics.undercut_um,
        removed_area_um2: *profile.removed_area_um2.last().unwrap(),
        wall_angle_deg: angle,
        artifacts: vec![
            csv_path.display().to_string(),
            svg_path.display().to_string(),
        ],
    };
    ctx.emit("etch_summary", &summary)
}
