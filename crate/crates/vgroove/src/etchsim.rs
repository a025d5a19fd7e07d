//! Time-stepped 2-D cross-section simulation of anisotropic KOH etching.
//!
//! The etch front under an ideal mask opening is carried by two facet
//! families: the horizontal (100) floor advancing downward at `rate_100`,
//! and the (111) sidewalls advancing along their own normals at
//! `rate_100 * anisotropy_ratio`. The front is represented as those facet
//! planes directly (a geometric plane-advance method) and re-sampled into
//! a polyline for each snapshot, which keeps runs deterministic: an
//! identical config produces a bit-identical profile.
//!
//! Coordinates put the wafer surface at `y = 0` with `y` up; depths below
//! the surface are positive numbers reported separately.
//!
//! Being a cross-section model, convex-corner undercutting along the
//! groove axis is out of scope, and the mask is treated as perfectly
//! selective and non-eroding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CrystalAngle;
use crate::vec2::Vec2;

/// Minimum mask-opening/cell-size quotient accepted by [`EtchConfig`].
const MIN_RESOLUTION: f64 = 50.0;

/// Fraction of a cell below which per-step front motion counts as stopped.
const STALL_FRACTION: f64 = 1e-3;

/// Tolerance for deciding a cavity is a full V rather than a trapezoid.
const FLOOR_EPS: f64 = 1e-9;

/// Simulation parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EtchConfig {
    /// Mask opening width, µm.
    pub mask_opening_um: f64,
    /// (100) etch rate, µm/min (take it from a fitted kinetics model).
    pub rate_100_um_min: f64,
    /// rate(111) / rate(100). The shipped default of 0.01 is an assumed
    /// figure for 40 wt% KOH, not a measured one.
    pub anisotropy_ratio: f64,
    /// Grid resolution for polyline sampling, µm.
    pub cell_size_um: f64,
    /// Integration step, min.
    pub time_step_min: f64,
    /// Total etch time, min.
    pub total_time_min: f64,
}

impl EtchConfig {
    /// Config with the default resolution (1 µm cells, 0.5 min steps) and
    /// the assumed 0.01 anisotropy ratio.
    pub fn new(mask_opening_um: f64, rate_100_um_min: f64, total_time_min: f64) -> Self {
        Self {
            mask_opening_um,
            rate_100_um_min,
            anisotropy_ratio: 0.01,
            cell_size_um: 1.0,
            time_step_min: 0.5,
            total_time_min,
        }
    }

    /// (111) rate implied by the ratio, µm/min.
    pub fn rate_111(&self) -> f64 {
        self.rate_100_um_min * self.anisotropy_ratio
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mask_opening_um > 0.0) {
            return Err(Error::Config(format!(
                "mask opening must be positive, got {} um",
                self.mask_opening_um
            )));
        }
        if !(self.rate_100_um_min > 0.0) {
            return Err(Error::Config(format!(
                "rate_100 must be positive, got {} um/min",
                self.rate_100_um_min
            )));
        }
        if !(self.anisotropy_ratio > 0.0 && self.anisotropy_ratio < 1.0) {
            return Err(Error::Config(format!(
                "anisotropy ratio must lie in (0, 1), got {}",
                self.anisotropy_ratio
            )));
        }
        if !(self.cell_size_um > 0.0) {
            return Err(Error::Config(format!(
                "cell size must be positive, got {} um",
                self.cell_size_um
            )));
        }
        if !(self.time_step_min > 0.0) {
            return Err(Error::Config(format!(
                "time step must be positive, got {} min",
                self.time_step_min
            )));
        }
        if self.total_time_min < 0.0 {
            return Err(Error::Config(format!(
                "total time must be non-negative, got {} min",
                self.total_time_min
            )));
        }
        if self.mask_opening_um / self.cell_size_um < MIN_RESOLUTION {
            return Err(Error::Config(format!(
                "resolution floor: mask opening / cell size = {:.1}, need >= {MIN_RESOLUTION}",
                self.mask_opening_um / self.cell_size_um
            )));
        }
        let advance = self.rate_100_um_min.max(self.rate_111()) * self.time_step_min;
        if advance > self.cell_size_um {
            return Err(Error::Config(format!(
                "per-step front advance {advance:.3} um exceeds the cell size \
                 {} um; use a smaller time step",
                self.cell_size_um
            )));
        }
        Ok(())
    }
}

/// Recorded etch-front history.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EtchProfile {
    /// Mask opening the run was configured with, µm.
    pub mask_opening_um: f64,
    /// Sampling resolution, µm.
    pub cell_size_um: f64,
    /// Snapshot times, min.
    pub timestamps_min: Vec<f64>,
    /// Per-snapshot surface polyline, surface coordinates (µm, y up,
    /// wafer surface at y = 0).
    pub surfaces: Vec<Vec<Vec2>>,
    /// Per-snapshot etched cross-section area, µm².
    pub removed_area_um2: Vec<f64>,
}

/// Scalar measurements of one snapshot.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProfileMetrics {
    /// Maximum etch depth, µm.
    pub depth_um: f64,
    /// Cavity width at the mask plane, µm.
    pub top_width_um: f64,
    /// Lateral etch beyond the mask edge (per side), µm.
    pub undercut_um: f64,
}

/// Front state: cumulative advances of the two facet families.
#[derive(Debug, Clone, Copy)]
struct FrontState {
    /// Cumulative (111) normal advance, µm.
    wall_advance: f64,
    /// Cavity depth (floor position, capped at the wall vertex), µm.
    depth: f64,
}

impl FrontState {
    fn start() -> Self {
        Self {
            wall_advance: 0.0,
            depth: 0.0,
        }
    }

    /// Lateral wall position at the mask plane for opening `w`.
    fn pivot(&self, config: &EtchConfig, theta: CrystalAngle) -> f64 {
        config.mask_opening_um / 2.0 + self.wall_advance / theta.radians().sin()
    }

    /// Depth at which the two advanced wall planes intersect.
    fn vertex_depth(&self, config: &EtchConfig, theta: CrystalAngle) -> f64 {
        self.pivot(config, theta) * theta.tan()
    }

    fn step(&mut self, config: &EtchConfig, theta: CrystalAngle, dt: f64) -> f64 {
        let before = *self;
        self.wall_advance += config.rate_111() * dt;
        let cap = self.vertex_depth(config, theta);
        self.depth = (self.depth + config.rate_100_um_min * dt).min(cap);
        let depth_motion = self.depth - before.depth;
        depth_motion.max(config.rate_111() * dt)
    }
}

/// Run the etch-front simulation.
pub fn simulate_profile(config: &EtchConfig) -> Result<EtchProfile> {
    config.validate()?;
    let theta = CrystalAngle::si_100_111();

    // Fixed lateral extent so every snapshot shares one domain: the mask
    // opening plus the worst-case undercut plus a visible shoulder.
    let max_undercut = config.rate_111() * config.total_time_min / theta.radians().sin();
    let half_domain = config.mask_opening_um / 2.0
        + max_undercut
        + (config.mask_opening_um / 10.0).max(5.0 * config.cell_size_um);

    let mut profile = EtchProfile {
        mask_opening_um: config.mask_opening_um,
        cell_size_um: config.cell_size_um,
        timestamps_min: Vec::new(),
        surfaces: Vec::new(),
        removed_area_um2: Vec::new(),
    };

    let mut state = FrontState::start();
    let record = |t: f64, state: &FrontState, profile: &mut EtchProfile| {
        let surface = sample_surface(config, theta, state, half_domain);
        let area = removed_area(&surface);
        profile.timestamps_min.push(t);
        profile.removed_area_um2.push(area);
        profile.surfaces.push(surface);
    };

    record(0.0, &state, &mut profile);
    if config.total_time_min == 0.0 {
        return Ok(profile);
    }

    let cadence = (config.total_time_min / 100.0).max(1.0);
    let stall = STALL_FRACTION * config.cell_size_um;
    let mut t = 0.0;
    let mut next_snapshot = cadence;
    loop {
        let dt = config.time_step_min.min(config.total_time_min - t);
        let motion = state.step(config, theta, dt);
        t += dt;
        let finished = t >= config.total_time_min - 1e-12;
        let stalled = motion < stall;
        if t >= next_snapshot - 1e-9 || finished || stalled {
            record(t, &state, &mut profile);
            while next_snapshot <= t + 1e-9 {
                next_snapshot += cadence;
            }
        }
        if finished || stalled {
            break;
        }
    }
    Ok(profile)
}

/// Build the snapshot polyline: masked shoulders, sidewall facets, and the
/// floor (absent once the walls have met), sampled at the cell size with
/// facet endpoints kept exact.
fn sample_surface(
    config: &EtchConfig,
    theta: CrystalAngle,
    state: &FrontState,
    half_domain: f64,
) -> Vec<Vec2> {
    let pivot = state.pivot(config, theta);
    let vertex_depth = state.vertex_depth(config, theta);
    let depth = state.depth.min(vertex_depth);
    let cell = config.cell_size_um;

    let mut pts: Vec<Vec2> = Vec::new();
    if depth <= 0.0 {
        // Untouched surface.
        append_segment(
            &mut pts,
            Vec2::new(-half_domain, 0.0),
            Vec2::new(half_domain, 0.0),
            cell,
        );
        return pts;
    }

    let floor_half = (vertex_depth - depth) * theta.cot();
    append_segment(
        &mut pts,
        Vec2::new(-half_domain, 0.0),
        Vec2::new(-pivot, 0.0),
        cell,
    );
    if floor_half > FLOOR_EPS {
        append_segment(
            &mut pts,
            Vec2::new(-pivot, 0.0),
            Vec2::new(-floor_half, -depth),
            cell,
        );
        append_segment(
            &mut pts,
            Vec2::new(-floor_half, -depth),
            Vec2::new(floor_half, -depth),
            cell,
        );
        append_segment(
            &mut pts,
            Vec2::new(floor_half, -depth),
            Vec2::new(pivot, 0.0),
            cell,
        );
    } else {
        append_segment(
            &mut pts,
            Vec2::new(-pivot, 0.0),
            Vec2::new(0.0, -depth),
            cell,
        );
        append_segment(
            &mut pts,
            Vec2::new(0.0, -depth),
            Vec2::new(pivot, 0.0),
            cell,
        );
    }
    append_segment(
        &mut pts,
        Vec2::new(pivot, 0.0),
        Vec2::new(half_domain, 0.0),
        cell,
    );
    pts
}

/// Append `a -> b` sampled every `cell` of arc length. `a` is skipped when
/// it repeats the previous point; `b` is always emitted exactly.
fn append_segment(pts: &mut Vec<Vec2>, a: Vec2, b: Vec2, cell: f64) {
    let len = (b - a).norm();
    if pts.is_empty() {
        pts.push(a);
    }
    if len == 0.0 {
        return;
    }
    let n = (len / cell).ceil() as usize;
    for i in 1..n {
        let f = i as f64 / n as f64;
        pts.push(a + (b - a).scale(f));
    }
    pts.push(b);
}

/// Cross-section area between the wafer surface and the front.
fn removed_area(surface: &[Vec2]) -> f64 {
    surface
        .windows(2)
        .map(|w| (w[1].x - w[0].x) * (-(w[0].y + w[1].y) / 2.0))
        .sum()
}

fn snapshot_index(profile: &EtchProfile, timestamp_min: f64) -> Result<usize> {
    profile
        .timestamps_min
        .iter()
        .position(|&t| (t - timestamp_min).abs() < 1e-9)
        .ok_or(Error::UnknownTimestamp {
            t_min: timestamp_min,
            count: profile.timestamps_min.len(),
        })
}

/// Sidewall angle to the horizontal at `timestamp_min`, radians, from a
/// least-squares line through each sidewall facet (the two fits are
/// averaged). Facets shorter than 10 cells are refused.
pub fn wall_angle(profile: &EtchProfile, timestamp_min: f64) -> Result<f64> {
    let idx = snapshot_index(profile, timestamp_min)?;
    let surface = &profile.surfaces[idx];

    // Wall points are those on clearly sloped segments; mask and floor
    // segments are flat.
    let steep = |a: &Vec2, b: &Vec2| {
        let dx = b.x - a.x;
        let dy = b.y - a.y;
        dx.abs() > 0.0 && (dy / dx).abs() > 0.5
    };
    let mut left: Vec<Vec2> = Vec::new();
    let mut right: Vec<Vec2> = Vec::new();
    for w in surface.windows(2) {
        if steep(&w[0], &w[1]) {
            let side = if w[0].x + w[1].x < 0.0 {
                &mut left
            } else {
                &mut right
            };
            if side.last() != Some(&w[0]) {
                side.push(w[0]);
            }
            side.push(w[1]);
        }
    }

    let min_points = 10;
    let mut angles = Vec::new();
    for (name, pts) in [("left", &left), ("right", &right)] {
        if pts.len() < min_points {
            return Err(Error::InsufficientFacet(format!(
                "{name} sidewall has {} sample points at t = {timestamp_min} min; \
                 need a facet of at least {min_points} cells",
                pts.len()
            )));
        }
        angles.push(fit_line_angle(pts));
    }
    Ok((angles[0] + angles[1]) / 2.0)
}

/// Least-squares slope angle (to horizontal) of a point run.
fn fit_line_angle(pts: &[Vec2]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.x).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.y).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.x - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.x - mx) * (p.y - my)).sum();
    (sxy / sxx).abs().atan()
}

/// Depth, top width, and undercut of one snapshot.
pub fn profile_metrics(profile: &EtchProfile, timestamp_min: f64) -> Result<ProfileMetrics> {
    let idx = snapshot_index(profile, timestamp_min)?;
    let surface = &profile.surfaces[idx];
    let depth = surface.iter().map(|p| -p.y).fold(0.0, f64::max);
    if depth <= FLOOR_EPS {
        return Ok(ProfileMetrics {
            depth_um: 0.0,
            top_width_um: profile.mask_opening_um,
            undercut_um: 0.0,
        });
    }
    // The cavity rim: last surface-level point before the front dips, and
    // first after it returns.
    let dip = 1e-9;
    let left_rim = surface
        .iter()
        .take_while(|p| p.y > -dip)
        .last()
        .map(|p| p.x)
        .unwrap_or(-profile.mask_opening_um / 2.0);
    let right_rim = surface
        .iter()
        .rev()
        .take_while(|p| p.y > -dip)
        .last()
        .map(|p| p.x)
        .unwrap_or(profile.mask_opening_um / 2.0);
    let top_width = right_rim - left_rim;
    Ok(ProfileMetrics {
        depth_um: depth,
        top_width_um: top_width,
        undercut_um: (top_width - profile.mask_opening_um) / 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_config() -> EtchConfig {
        EtchConfig::new(250.0, 0.93, 60.0)
    }

    #[test]
    fn config_validation_catches_bad_inputs() {
        let mut c = quick_config();
        c.anisotropy_ratio = 1.5;
        assert!(matches!(c.validate(), Err(Error::Config(_))));

        let mut c = quick_config();
        c.cell_size_um = 10.0; // 250/10 = 25 < 50
        assert!(matches!(c.validate(), Err(Error::Config(_))));

        let mut c = quick_config();
        c.time_step_min = 5.0; // 0.93 * 5 = 4.65 > 1 um cell
        assert!(matches!(c.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn zero_time_leaves_a_flat_surface() {
        let mut c = quick_config();
        c.total_time_min = 0.0;
        let profile = simulate_profile(&c).unwrap();
        assert_eq!(profile.timestamps_min, vec![0.0]);
        assert_eq!(profile.removed_area_um2[0], 0.0);
        assert!(profile.surfaces[0].iter().all(|p| p.y == 0.0));

        let metrics = profile_metrics(&profile, 0.0).unwrap();
        assert_eq!(metrics.depth_um, 0.0);
        assert_eq!(metrics.top_width_um, 250.0);
        assert_eq!(metrics.undercut_um, 0.0);
    }

    #[test]
    fn flat_surface_has_no_fittable_facet() {
        let mut c = quick_config();
        c.total_time_min = 0.0;
        let profile = simulate_profile(&c).unwrap();
        assert!(matches!(
            wall_angle(&profile, 0.0),
            Err(Error::InsufficientFacet(_))
        ));
    }

    #[test]
    fn unknown_timestamp_is_a_lookup_error() {
        let profile = simulate_profile(&quick_config()).unwrap();
        assert!(matches!(
            profile_metrics(&profile, 123.456),
            Err(Error::UnknownTimestamp { .. })
        ));
    }

    #[test]
    fn early_trapezoid_keeps_a_flat_floor_and_true_walls() {
        let profile = simulate_profile(&quick_config()).unwrap();
        let t_end = *profile.timestamps_min.last().unwrap();
        let metrics = profile_metrics(&profile, t_end).unwrap();
        // 60 min at 0.93 um/min, well below the 176.8 um self-limit.
        assert!((metrics.depth_um - 55.8).abs() < 1e-6);
        let angle = wall_angle(&profile, t_end).unwrap();
        assert!((angle.to_degrees() - 54.7356).abs() < 0.5);
        // Floor present: some interior point sits at max depth away from x=0.
        let surface = profile.surfaces.last().unwrap();
        let floor_pts = surface
            .iter()
            .filter(|p| (-p.y - metrics.depth_um).abs() < 1e-9)
            .count();
        assert!(floor_pts > 2, "expected a sampled flat floor");
    }

    #[test]
    fn removed_area_never_decreases() {
        let profile = simulate_profile(&quick_config()).unwrap();
        for pair in profile.removed_area_um2.windows(2) {
            assert!(pair[1] >= pair[0] - 1e-9);
        }
    }

    #[test]
    fn depth_never_decreases_at_any_x() {
        let profile = simulate_profile(&quick_config()).unwrap();
        // Compare consecutive snapshots on a common x grid by linear
        // interpolation of each polyline.
        let sample = |surface: &[Vec2], x: f64| -> f64 {
            let mut y = 0.0;
            for w in surface.windows(2) {
                if (w[0].x..=w[1].x).contains(&x) {
                    let f = if w[1].x == w[0].x {
                        0.0
                    } else {
                        (x - w[0].x) / (w[1].x - w[0].x)
                    };
                    y = w[0].y + f * (w[1].y - w[0].y);
                    break;
                }
            }
            y
        };
        for pair in profile.surfaces.windows(2) {
            for i in 0..=100 {
                let x = -150.0 + i as f64 * 3.0;
                assert!(sample(&pair[1], x) <= sample(&pair[0], x) + 1e-9);
            }
        }
    }

    #[test]
    fn identical_configs_produce_bit_identical_profiles() {
        let a = simulate_profile(&quick_config()).unwrap();
        let b = simulate_profile(&quick_config()).unwrap();
        assert_eq!(a.timestamps_min, b.timestamps_min);
        assert_eq!(a.removed_area_um2, b.removed_area_um2);
        assert_eq!(a.surfaces, b.surfaces);
    }

    #[test]
    fn surfaces_are_simple_polylines() {
        // x strictly non-decreasing along every snapshot makes
        // self-intersection impossible.
        let profile = simulate_profile(&quick_config()).unwrap();
        for surface in &profile.surfaces {
            for w in surface.windows(2) {
                assert!(w[1].x >= w[0].x);
            }
        }
    }
}
