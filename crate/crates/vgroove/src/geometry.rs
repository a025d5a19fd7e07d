//! Closed-form V-groove and fiber-seating geometry.
//!
//! Anisotropic KOH etching of (100) silicon exposes (111) sidewalls at a
//! fixed 54.74° to the surface, so a mask opening of width `w` self-limits
//! at depth `w / sqrt(2)` where the two walls meet. A bare fiber of radius
//! `r` dropped into such a groove rests tangent to both walls; the depth
//! that puts the fiber top flush with the wafer surface is
//!
//! ```text
//! d = 2 r + x,   x = r (1 - cos θ) sec θ        (wall clearance)
//!   = r (1 + sec θ)                             (algebraically equal)
//! ```
//!
//! All lengths in this module are micrometres. Angles are radians inside
//! the API; printed output rounds to two decimals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec2::Vec2;

/// Relative tolerance used when validating groove proportions.
const GROOVE_PROPORTION_TOL: f64 = 1e-9;

/// The (100)/(111) silicon inter-plane angle, stored exactly as arctan(√2).
///
/// The value is kept at full precision internally; [`CrystalAngle::degrees`]
/// and the `Display` impl round only for presentation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalAngle {
    radians: f64,
}

impl CrystalAngle {
    /// The angle between (100) and (111) lattice planes, arctan(√2) ≈ 54.74°.
    pub fn si_100_111() -> Self {
        Self {
            radians: 2.0_f64.sqrt().atan(),
        }
    }

    pub fn radians(self) -> f64 {
        self.radians
    }

    pub fn degrees(self) -> f64 {
        self.radians.to_degrees()
    }

    /// tan θ = √2 for the silicon angle.
    pub fn tan(self) -> f64 {
        self.radians.tan()
    }

    /// cot θ = 1/√2 for the silicon angle.
    pub fn cot(self) -> f64 {
        1.0 / self.radians.tan()
    }

    /// sec θ = √3 for the silicon angle.
    pub fn sec(self) -> f64 {
        1.0 / self.radians.cos()
    }
}

impl Default for CrystalAngle {
    fn default() -> Self {
        Self::si_100_111()
    }
}

impl std::fmt::Display for CrystalAngle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.2}°", self.degrees())
    }
}

impl Serialize for CrystalAngle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.degrees())
    }
}

impl<'de> Deserialize<'de> for CrystalAngle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let deg = f64::deserialize(d)?;
        let exact = CrystalAngle::si_100_111();
        if (deg - exact.degrees()).abs() > 0.01 {
            return Err(serde::de::Error::custom(format!(
                "wall angle {deg}° is not the (100)/(111) angle {:.4}°",
                exact.degrees()
            )));
        }
        // Snap to the exact value so downstream algebra stays drift-free.
        Ok(exact)
    }
}

/// A bare optical fiber: cladding radius, numerical aperture, source
/// wavelength.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiberSpec {
    /// Bare-fiber cladding radius, µm.
    pub radius_um: f64,
    /// Emission-cone numerical aperture (sine of the half angle).
    pub numerical_aperture: f64,
    /// Source wavelength, nm.
    pub wavelength_nm: f64,
    /// Core radius, µm. Defaults to half the cladding radius, the usual
    /// proportion for 62.5/125 graded-index multimode fiber.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core_radius_um: Option<f64>,
}

impl FiberSpec {
    /// A 62.5 µm-radius multimode fiber fed by a 632 nm source. The NA of
    /// 0.275 is the typical multimode figure; it is an assumption, not a
    /// measured property of any particular fiber.
    pub fn default_multimode() -> Self {
        Self {
            radius_um: 62.5,
            numerical_aperture: 0.275,
            wavelength_nm: 632.0,
            core_radius_um: None,
        }
    }

    /// Core radius with the 62.5/125 default applied.
    pub fn core_radius(&self) -> f64 {
        self.core_radius_um.unwrap_or(self.radius_um / 2.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius_um > 0.0) {
            return Err(Error::Domain(format!(
                "fiber radius must be positive, got {} um",
                self.radius_um
            )));
        }
        if !(self.numerical_aperture > 0.0 && self.numerical_aperture < 1.0) {
            return Err(Error::Domain(format!(
                "numerical aperture must lie in (0, 1), got {}",
                self.numerical_aperture
            )));
        }
        if !(self.wavelength_nm > 0.0) {
            return Err(Error::Domain(format!(
                "wavelength must be positive, got {} nm",
                self.wavelength_nm
            )));
        }
        if let Some(core) = self.core_radius_um {
            if !(core > 0.0 && core <= self.radius_um) {
                return Err(Error::Domain(format!(
                    "core radius must lie in (0, {}] um, got {} um",
                    self.radius_um, core
                )));
            }
        }
        Ok(())
    }
}

/// A V-groove design: mask opening, etch depth, wall angle, and the
/// clearance parameter the depth was derived from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrooveDesign {
    /// Mask opening width `w`, µm.
    pub mask_opening_um: f64,
    /// Etch depth `d`, µm.
    pub depth_um: f64,
    /// Sidewall angle to the surface; always the (100)/(111) angle.
    #[serde(rename = "wall_angle_deg", default)]
    pub wall_angle: CrystalAngle,
    /// Wall-clearance term `x = r (1 - cos θ) sec θ`, µm.
    pub clearance_um: f64,
    /// Extra mask width beyond the geometric minimum, µm.
    pub margin_um: f64,
}

impl GrooveDesign {
    /// A groove described directly by its cross-section rather than derived
    /// from a fiber: `opening_um` wide at the surface, `depth_um` deep.
    pub fn from_cross_section(opening_um: f64, depth_um: f64) -> Result<Self> {
        let groove = Self {
            mask_opening_um: opening_um,
            depth_um,
            wall_angle: CrystalAngle::si_100_111(),
            clearance_um: 0.0,
            margin_um: 0.0,
        };
        groove.validate()?;
        Ok(groove)
    }

    /// Proportion checks; deserialized designs should pass through here.
    pub fn validate(&self) -> Result<()> {
        if !(self.depth_um > 0.0) {
            return Err(Error::Domain(format!(
                "groove depth must be positive, got {} um",
                self.depth_um
            )));
        }
        if !(self.mask_opening_um > 0.0) {
            return Err(Error::Domain(format!(
                "groove opening must be positive, got {} um",
                self.mask_opening_um
            )));
        }
        let min_opening = 2.0 * self.depth_um * self.wall_angle.cot();
        if self.mask_opening_um < min_opening * (1.0 - GROOVE_PROPORTION_TOL) {
            return Err(Error::Domain(format!(
                "a {} um deep groove needs an opening of at least \
                 {min_opening:.3} um; got {} um",
                self.depth_um, self.mask_opening_um
            )));
        }
        if self.margin_um < 0.0 {
            return Err(Error::Domain(format!(
                "mask margin must be non-negative, got {} um",
                self.margin_um
            )));
        }
        Ok(())
    }

    /// Depth at which the sidewalls anchored at this opening meet.
    pub fn virtual_apex_depth(&self) -> f64 {
        self.mask_opening_um / 2.0 * self.wall_angle.tan()
    }

    /// True when the groove etched to its full V (no flat floor left).
    pub fn is_full_v(&self) -> bool {
        (self.depth_um - self.virtual_apex_depth()).abs()
            <= GROOVE_PROPORTION_TOL * self.virtual_apex_depth()
    }
}

/// How a fiber comes to rest in a groove cross-section.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum Seating {
    /// Tangent to both (111) walls below the mask plane.
    Seated(SeatingResult),
    /// The groove is too shallow for wall contact; the fiber rests on the
    /// two rim corners at the mask plane.
    RidesOnRim(RimContact),
    /// A wide, shallow trapezoid: the fiber reaches the flat floor before
    /// the walls close in on it.
    RestsOnFloor(FloorContact),
}

impl Seating {
    /// Fiber-top height above the wafer surface regardless of state.
    pub fn protrusion_um(&self) -> f64 {
        match self {
            Seating::Seated(s) => s.protrusion_um,
            Seating::RidesOnRim(r) => r.protrusion_um,
            Seating::RestsOnFloor(f) => f.protrusion_um,
        }
    }
}

/// Wall-tangent seating solution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeatingResult {
    /// Fiber-center height above the groove apex (virtual apex for a
    /// truncated groove), µm: `r sec θ`.
    pub contact_height_um: f64,
    /// Fiber-top height above the wafer surface, µm; negative = recessed.
    pub protrusion_um: f64,
    /// The two wall contact points, surface coordinates (x right, y up,
    /// y = 0 at the wafer surface), µm.
    pub contacts: [Vec2; 2],
}

/// Rim-corner contact (groove too shallow for the fiber).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RimContact {
    /// Fiber-center height above the wafer surface, µm.
    pub center_height_um: f64,
    /// The two rim corners carrying the fiber, µm.
    pub contacts: [Vec2; 2],
    /// Fiber-top height above the wafer surface, µm.
    pub protrusion_um: f64,
}

/// Floor contact (trapezoid floor reached before wall tangency).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FloorContact {
    /// Fiber-center depth below the wafer surface, µm.
    pub center_depth_um: f64,
    /// Clearance between the fiber and each wall at rest, µm.
    pub wall_gap_um: f64,
    /// Fiber-top height above the wafer surface, µm.
    pub protrusion_um: f64,
}

/// Minimum etch depth that seats `fiber` flush with the wafer surface:
/// `d = 2 r + r (1 - cos θ) sec θ`.
pub fn seat_depth(fiber: &FiberSpec) -> Result<f64> {
    if !(fiber.radius_um > 0.0) {
        return Err(Error::Domain(format!(
            "fiber radius must be positive, got {} um",
            fiber.radius_um
        )));
    }
    let theta = CrystalAngle::si_100_111();
    let r = fiber.radius_um;
    Ok(2.0 * r + r * (1.0 - theta.radians().cos()) * theta.sec())
}

/// Mask opening needed to etch to `depth_um`: `w = 2 d cot θ = √2 d`.
pub fn opening_width(depth_um: f64) -> Result<f64> {
    if !(depth_um > 0.0) {
        return Err(Error::Domain(format!(
            "etch depth must be positive, got {depth_um} um"
        )));
    }
    Ok(2.0 * depth_um * CrystalAngle::si_100_111().cot())
}

/// Depth at which a groove under `mask_opening_um` stops deepening:
/// `d_max = (w / 2) tan θ = w / √2`.
pub fn self_limit_depth(mask_opening_um: f64) -> Result<f64> {
    if !(mask_opening_um > 0.0) {
        return Err(Error::Domain(format!(
            "mask opening must be positive, got {mask_opening_um} um"
        )));
    }
    Ok(mask_opening_um / 2.0 * CrystalAngle::si_100_111().tan())
}

/// Design the groove that seats `fiber` flush, with `margin_um` of extra
/// mask width on top of the geometric minimum.
pub fn design_groove(fiber: &FiberSpec, margin_um: f64) -> Result<GrooveDesign> {
    if margin_um < 0.0 {
        return Err(Error::Domain(format!(
            "mask margin must be non-negative, got {margin_um} um"
        )));
    }
    let theta = CrystalAngle::si_100_111();
    let depth = seat_depth(fiber)?;
    let opening = opening_width(depth)? + margin_um;
    let clearance = fiber.radius_um * (1.0 - theta.radians().cos()) * theta.sec();
    Ok(GrooveDesign {
        mask_opening_um: opening,
        depth_um: depth,
        wall_angle: theta,
        clearance_um: clearance,
        margin_um,
    })
}

/// Rest a fiber in a groove cross-section.
///
/// The groove is taken as two (111) walls anchored at the surface opening
/// `(±w/2, 0)` descending toward a (possibly virtual) apex at depth
/// `w/√2`, truncated by a flat floor at `depth_um` when the groove stopped
/// short of the full V. Resting order while lowering the fiber along the
/// centerline decides the state: rim corners, then walls, then floor.
pub fn fiber_seating(groove: &GrooveDesign, fiber: &FiberSpec) -> Result<Seating> {
    if !(fiber.radius_um > 0.0) {
        return Err(Error::Domain(format!(
            "fiber radius must be positive, got {} um",
            fiber.radius_um
        )));
    }
    let theta = groove.wall_angle;
    let r = fiber.radius_um;
    let half_w = groove.mask_opening_um / 2.0;
    let apex_depth = groove.virtual_apex_depth();

    // Tangency against the infinite wall lines.
    let contact_depth = apex_depth - r * theta.tan() * theta.radians().sin();
    let wall_center_depth = apex_depth - r * theta.sec();

    if contact_depth < 0.0 {
        // Contact would land above the mask plane: the fiber never reaches
        // the walls and carries on the rim corners instead.
        let center_height = (r * r - half_w * half_w).sqrt();
        return Ok(Seating::RidesOnRim(RimContact {
            center_height_um: center_height,
            contacts: [Vec2::new(-half_w, 0.0), Vec2::new(half_w, 0.0)],
            protrusion_um: center_height + r,
        }));
    }

    let floor_center_depth = groove.depth_um - r;
    if floor_center_depth < wall_center_depth {
        // The floor interrupts the descent before wall tangency.
        let center = Vec2::new(0.0, -floor_center_depth);
        let wall_a = Vec2::new(-half_w, 0.0);
        let wall_b = Vec2::new(-half_w + theta.cot(), -1.0);
        let gap = center.distance_to_line(wall_a, wall_b) - r;
        return Ok(Seating::RestsOnFloor(FloorContact {
            center_depth_um: floor_center_depth,
            wall_gap_um: gap,
            protrusion_um: r - floor_center_depth,
        }));
    }

    let contact_x = r * theta.radians().sin();
    Ok(Seating::Seated(SeatingResult {
        contact_height_um: r * theta.sec(),
        protrusion_um: r - wall_center_depth,
        contacts: [
            Vec2::new(-contact_x, -contact_depth),
            Vec2::new(contact_x, -contact_depth),
        ],
    }))
}
