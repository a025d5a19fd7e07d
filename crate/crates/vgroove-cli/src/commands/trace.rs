//! `trace`: follow the excitation beam from the seated fiber across the
//! micro-mirror to the detector plane; emit the ray-path SVG and the
//! power budget.

use clap::Args;
use serde::Serialize;
use vgroove::geometry::{fiber_seating, Seating};
use vgroove::optics::{
    beam_footprint, footprint_on_detector, power_budget, reflect_ray, BeamFootprint, MirrorSpec,
    PowerBudget, Ray,
};
use vgroove::vec2::Vec2;

use crate::config::PlatformConfig;
use crate::errors::{CliError, CliResult};
use crate::svg::{Mapper, SvgDoc};

use super::Ctx;

#[derive(Debug, Args)]
pub struct TraceArgs {}

#[derive(Debug, Serialize)]
struct DetectorReport {
    height_um: f64,
    aperture_um: f64,
    /// Detector center sits directly above the mirror hit point.
    center_x_um: f64,
    /// Where the central ray crosses the detector plane.
    landing_x_um: f64,
    central_ray_captured: bool,
}

#[derive(Debug, Serialize)]
struct TraceOutput {
    budget: PowerBudget,
    /// Echo of the mirror, so the optical constants the numbers came
    /// from are part of the report.
    mirror: MirrorSpec,
    seating: Seating,
    mirror_hit: Vec2,
    reflected_direction: Vec2,
    incidence_deg: f64,
    elevation_deg: f64,
    detector: DetectorReport,
    footprint_on_mirror: BeamFootprint,
    footprint_on_detector: BeamFootprint,
    artifacts: Vec<String>,
}

pub fn run(ctx: &Ctx, _args: &TraceArgs) -> CliResult<()> {
    let config = PlatformConfig::load(ctx.require_config("trace")?)?;
    let fiber = &config.fiber;
    let mirror = &config.mirror;
    let theta = config.groove.wall_angle.radians();

    let seating = fiber_seating(&config.groove, fiber)?;
    let center_y = match &seating {
        Seating::Seated(s) => s.contact_height_um - config.groove.virtual_apex_depth(),
        Seating::RidesOnRim(r) => r.center_height_um,
        Seating::RestsOnFloor(f) => -f.center_depth_um,
    };
    if center_y >= 0.0 && !matches!(seating, Seating::Seated(_)) {
        // A fiber stranded above the surface has no groove-guided beam.
        return Err(CliError::Domain(
            "fiber does not seat in the groove; no guided beam to trace".into(),
        ));
    }

    // The mirror facet plane passes through the coordinate origin; a beam
    // at height center_y strikes it at x = center_y cot(theta).
    let hit_x = center_y / theta.tan();
    let start_x = hit_x - config.fiber_standoff_um;
    let incident = Ray::new(
        Vec2::new(start_x, center_y),
        Vec2::new(1.0, 0.0),
        config.input_power_uw,
    )?;
    let reflected = reflect_ray(&incident, mirror)?;
    let incidence_deg = incident
        .direction
        .dot(mirror.normal())
        .abs()
        .acos()
        .to_degrees();
    let elevation_deg = reflected.direction.y.asin().to_degrees();

    // Detector plane above the wafer surface, centered over the hit point.
    let det_y = config.detector_height_um;
    if reflected.direction.y <= 0.0 {
        return Err(CliError::Domain(
            "reflected beam does not rise toward the detector".into(),
        ));
    }
    let travel = (det_y - reflected.origin.y) / reflected.direction.y;
    let landing_x = reflected.origin.x + travel * reflected.direction.x;
    let captured = (landing_x - reflected.origin.x).abs() <= config.detector_aperture_um;

    let budget = power_budget(fiber, mirror, config.capture_factor, config.input_power_uw)?;
    let on_mirror = beam_footprint(fiber, config.fiber_standoff_um, mirror)?;
    let on_detector = footprint_on_detector(
        fiber,
        mirror,
        config.fiber_standoff_um,
        det_y - reflected.origin.y,
    )?;

    let svg = render_scene(&config, center_y, hit_x, &incident, &reflected, landing_x);
    let svg_path = ctx.write_artifact("trace.svg", &svg)?;

    let output = TraceOutput {
        budget,
        mirror: mirror.clone(),
        seating,
        mirror_hit: reflected.origin,
        reflected_direction: reflected.direction,
        incidence_deg,
        elevation_deg,
        detector: DetectorReport {
            height_um: det_y,
            aperture_um: config.detector_aperture_um,
            center_x_um: reflected.origin.x,
            landing_x_um: landing_x,
            central_ray_captured: captured,
        },
        footprint_on_mirror: on_mirror,
        footprint_on_detector: on_detector,
        artifacts: vec![svg_path.display().to_string()],
    };
    ctx.emit("trace", &output)
}

fn render_scene(
    config: &PlatformConfig,
    center_y: f64,
    hit_x: f64,
    incident: &Ray,
    reflected: &Ray,
    landing_x: f64,
) -> String {
    let (px_w, px_h) = (860.0, 600.0);
    let mut doc = SvgDoc::new(px_w, px_h);
    let depth = config.groove.depth_um;
    let r = config.fiber.radius_um;
    let theta = config.groove.wall_angle.radians();

    // Frame the whole path: fiber run-in, mirror, and the landing point
    // on the detector plane (the reflected beam travels up and backward).
    let aperture = config.detector_aperture_um;
    let x_left = (incident.origin.x - 2.0 * r).min(landing_x - 0.1 * aperture);
    let x_right = (hit_x + 0.25 * aperture).max(hit_x + 100.0);
    let map = Mapper {
        x0: x_left,
        x1: x_right,
        y0: config.detector_height_um * 1.1,
        y1: -(depth + 40.0),
        px_w,
        px_h,
        margin: 40.0,
    };
    // y0 maps to the top: flip by passing y0 > y1 so larger y is higher.

    // Wafer surface and groove floor.
    doc.line(map.map(x_left, 0.0), map.map(0.0, 0.0), "#444444", 2.0);
    doc.line(
        map.map(x_left, -depth),
        map.map(-depth / theta.tan(), -depth),
        "#999999",
        1.5,
    );
    // Mirror facet from the floor up to the surface.
    doc.line(
        map.map(-depth / theta.tan(), -depth),
        map.map(0.0, 0.0),
        "#2255aa",
        3.0,
    );
    // Fiber cladding band and axis.
    doc.line(
        map.map(x_left, center_y + r),
        map.map(incident.origin.x, center_y + r),
        "#888888",
        1.0,
    );
    doc.line(
        map.map(x_left, center_y - r),
        map.map(incident.origin.x, center_y - r),
        "#888888",
        1.0,
    );
    doc.dashed_line(
        map.map(x_left, center_y),
        map.map(incident.origin.x, center_y),
        "#888888",
        1.0,
    );
    // Incident and reflected central rays; the hit point gets a marker.
    doc.line(
        map.map(incident.origin.x, incident.origin.y),
        map.map(hit_x, center_y),
        "#cc3333",
        1.5,
    );
    doc.circle(map.map(hit_x, center_y), 3.0, "#cc3333");
    doc.line(
        map.map(hit_x, center_y),
        map.map(landing_x, config.detector_height_um),
        "#cc3333",
        1.5,
    );
    // Detector segment centered above the hit point.
    doc.line(
        map.map(
            hit_x - config.detector_aperture_um,
            config.detector_height_um,
        ),
        map.map(
            hit_x + config.detector_aperture_um,
            config.detector_height_um,
        ),
        "#227722",
        4.0,
    );
    doc.text(
        map.map(hit_x, config.detector_height_um * 1.05),
        12.0,
        "detector",
    );
    doc.text(map.map(x_left, center_y + r + 12.0), 12.0, "fiber");
    doc.text(
        map.map(-depth / theta.tan(), -depth - 16.0),
        12.0,
        "mirror facet",
    );
    doc.text(
        (40.0, 20.0),
        12.0,
        &format!(
            "input {:.4} uW, after mirror {:.4} uW",
            incident.power_uw, reflected.power_uw
        ),
    );
    doc.finish()
}
