//! Geometric beam-footprint model: NA emission cone onto the tilted
//! mirror, then onward to a detector plane.

use serde::{Deserialize, Serialize};

use super::{reflect_direction, MirrorSpec};
use crate::error::{Error, Result};
use crate::geometry::FiberSpec;
use crate::vec2::Vec2;

/// Illuminated ellipse on a plane, with the beam axis after reflection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BeamFootprint {
    pub major_axis_um: f64,
    pub minor_axis_um: f64,
    /// Beam axis direction after the mirror (unit vector).
    pub centroid_direction: Vec2,
    /// Fraction of the footprint extending past the facet, when the mirror
    /// has a finite extent and the beam overfills it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clipped_fraction: Option<f64>,
}

/// Footprint of the fiber's emission cone on the mirror facet.
///
/// The fiber emits a cone of half-angle arcsin(NA) from its core disk; at
/// `path_length_um` the beam radius has grown to `core + L tan(half)`. On
/// the facet, tilted so the axial ray arrives at incidence i, the spot is
/// an ellipse with minor axis equal to the beam diameter and major axis
/// stretched by 1 / cos i.
pub fn beam_footprint(
    fiber: &FiberSpec,
    path_length_um: f64,
    mirror: &MirrorSpec,
) -> Result<BeamFootprint> {
    fiber.validate()?;
    mirror.validate()?;
    if path_length_um < 0.0 {
        return Err(Error::Domain(format!(
            "path length must be non-negative, got {path_length_um} um"
        )));
    }
    let half_angle = fiber.numerical_aperture.asin();
    let beam_radius = fiber.core_radius() + path_length_um * half_angle.tan();
    let incidence = mirror.axial_incidence();
    let minor = 2.0 * beam_radius;
    let major = minor / incidence.cos();
    let axis = reflect_direction(Vec2::new(1.0, 0.0), mirror.normal());
    let clipped = mirror.facet_length_um.and_then(|facet| {
        if major > facet {
            Some((major - facet) / major)
        } else {
            None
        }
    });
    Ok(BeamFootprint {
        major_axis_um: major,
        minor_axis_um: minor,
        centroid_direction: axis,
        clipped_fraction: clipped,
    })
}

/// Footprint on a horizontal detector plane `detector_height_um` above the
/// mirror hit point, after reflection.
pub fn footprint_on_detector(
    fiber: &FiberSpec,
    mirror: &MirrorSpec,
    path_to_mirror_um: f64,
    detector_height_um: f64,
) -> Result<BeamFootprint> {
    let on_mirror = beam_footprint(fiber, path_to_mirror_um, mirror)?;
    if !(detector_height_um > 0.0) {
        return Err(Error::Domain(format!(
            "detector height must be positive, got {detector_height_um} um"
        )));
    }
    let axis = on_mirror.centroid_direction;
    if axis.y <= 0.0 {
        return Err(Error::NoIntersection(
            "reflected beam does not rise toward the detector plane".into(),
        ));
    }
    let travel = detector_height_um / axis.y;
    let half_angle = fiber.numerical_aperture.asin();
    let radius = on_mirror.minor_axis_um / 2.0 + travel * half_angle.tan();
    let minor = 2.0 * radius;
    // Obliquity between the beam axis and the detector normal (vertical).
    let major = minor / axis.y;
    Ok(BeamFootprint {
        major_axis_um: major,
        minor_axis_um: minor,
        centroid_direction: axis,
        clipped_fraction: on_mirror.clipped_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CrystalAngle;

    fn fiber_with_na(na: f64) -> FiberSpec {
        FiberSpec {
            numerical_aperture: na,
            ..FiberSpec::default_multimode()
        }
    }

    #[test]
    fn collimated_limit_elongates_by_sec_incidence() {
        let fiber = fiber_with_na(1e-9);
        let fp = beam_footprint(&fiber, 500.0, &MirrorSpec::bare_silicon()).unwrap();
        let ratio = fp.major_axis_um / fp.minor_axis_um;
        // incidence = 90° - 54.7356° = 35.2644°, sec = 1.2247
        let expected =
            1.0 / (std::f64::consts::FRAC_PI_2 - CrystalAngle::si_100_111().radians()).cos();
        assert!((ratio - expected).abs() < 1e-12);
        assert!((ratio - 1.224_744_871_391_589).abs() < 1e-9);
        // Collimated: minor stays at the core diameter.
        assert!((fp.minor_axis_um - 2.0 * fiber.core_radius()).abs() < 1e-6);
    }

    #[test]
    fn zero_path_gives_core_sized_minor_axis() {
        let fiber = fiber_with_na(0.275);
        let fp = beam_footprint(&fiber, 0.0, &MirrorSpec::bare_silicon()).unwrap();
        assert!((fp.minor_axis_um - 2.0 * fiber.core_radius()).abs() < 1e-12);
        assert!(fp.major_axis_um > fp.minor_axis_um);
    }

    #[test]
    fn footprint_area_exceeds_fiber_face_for_positive_na() {
        let fiber = fiber_with_na(0.275);
        let fp = beam_footprint(&fiber, 100.0, &MirrorSpec::bare_silicon()).unwrap();
        let face = std::f64::consts::PI * fiber.core_radius().powi(2);
        let spot = std::f64::consts::PI * fp.major_axis_um / 2.0 * fp.minor_axis_um / 2.0;
        assert!(spot > face);
    }

    #[test]
    fn overfilled_facet_reports_clipped_fraction() {
        let fiber = fiber_with_na(0.275);
        let mut mirror = MirrorSpec::bare_silicon();
        mirror.facet_length_um = Some(50.0);
        let fp = beam_footprint(&fiber, 500.0, &mirror).unwrap();
        let frac = fp.clipped_fraction.expect("beam overfills a 50 um facet");
        assert!(frac > 0.0 && frac < 1.0);

        mirror.facet_length_um = Some(10_000.0);
        let fp = beam_footprint(&fiber, 500.0, &mirror).unwrap();
        assert!(fp.clipped_fraction.is_none());
    }

    #[test]
    fn detector_footprint_spreads_beyond_mirror_footprint() {
        let fiber = fiber_with_na(0.275);
        let mirror = MirrorSpec::aluminum_coated();
        let on_mirror = beam_footprint(&fiber, 200.0, &mirror).unwrap();
        let on_det = footprint_on_detector(&fiber, &mirror, 200.0, 5_000.0).unwrap();
        assert!(on_det.minor_axis_um > on_mirror.minor_axis_um);
        assert!(on_det.major_axis_um >= on_det.minor_axis_um);
    }
}
