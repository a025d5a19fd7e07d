//! Fresnel power reflectance at an air/material interface.
//!
//! Amplitude coefficients for a wave arriving from vacuum (n = 1) onto a
//! medium with complex index ñ = n + ik:
//!
//! ```text
//! r_s = (cos i - ñ cos t) / (cos i + ñ cos t)
//! r_p = (ñ cos i - cos t) / (ñ cos i + cos t)
//! cos t = sqrt(1 - (sin i / ñ)²)          (principal branch)
//! ```
//!
//! Power reflectance is |r|²; unpolarized light takes the s/p mean.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::OpticalMaterial;
use crate::error::{Error, Result};

/// Incident polarization state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    /// Electric field perpendicular to the plane of incidence.
    S,
    /// Electric field parallel to the plane of incidence.
    P,
    /// Mean of the two; the default for fiber-scrambled light.
    Unpolarized,
}

impl std::str::FromStr for Polarization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s" => Ok(Self::S),
            "p" => Ok(Self::P),
            "u" | "unpolarized" => Ok(Self::Unpolarized),
            other => Err(Error::Domain(format!(
                "unknown polarization '{other}'; use s, p, or unpolarized"
            ))),
        }
    }
}

/// Power reflectance of `material` at `incidence_rad` (from the surface
/// normal, 0 ≤ i < 90°).
pub fn fresnel_reflectance(
    material: &OpticalMaterial,
    incidence_rad: f64,
    polarization: Polarization,
) -> Result<f64> {
    material.validate()?;
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&incidence_rad) {
        return Err(Error::Domain(format!(
            "incidence angle must lie in [0°, 90°), got {:.3}°",
            incidence_rad.to_degrees()
        )));
    }
    let n2 = material.complex_index();
    let cos_i = Complex64::new(incidence_rad.cos(), 0.0);
    let sin_i = incidence_rad.sin();
    let sin_t = Complex64::new(sin_i, 0.0) / n2;
    let cos_t = (Complex64::new(1.0, 0.0) - sin_t * sin_t).sqrt();

    let r_s = (cos_i - n2 * cos_t) / (cos_i + n2 * cos_t);
    let r_p = (n2 * cos_i - cos_t) / (n2 * cos_i + cos_t);
    Ok(match polarization {
        Polarization::S => r_s.norm_sqr(),
        Polarization::P => r_p.norm_sqr(),
        Polarization::Unpolarized => (r_s.norm_sqr() + r_p.norm_sqr()) / 2.0,
    })
}

/// Closed-form normal-incidence reflectance |(ñ - 1) / (ñ + 1)|².
pub fn normal_incidence_reflectance(material: &OpticalMaterial) -> f64 {
    let n = material.complex_index();
    let one = Complex64::new(1.0, 0.0);
    ((n - one) / (n + one)).norm_sqr()
}
