//! Excitation-path optics: fiber emission, micro-mirror reflection,
//! Fresnel reflectance, roughness scatter, and the chained power budget.
//!
//! The (111) sidewall at the groove end doubles as a turning mirror for
//! the fiber beam. A horizontal ray meets that facet at 35.26° incidence
//! and leaves at 70.53° above the horizontal (19.47° off the wafer
//! normal). Everything here is a pure function; ray batches can be
//! evaluated from any number of threads.

mod beam;
mod budget;
mod fresnel;
mod scatter;

pub use beam::{beam_footprint, footprint_on_detector, BeamFootprint};
pub use budget::{fit_capture_factor, power_budget, CaptureFit, PowerBudget, PowerMeasurement};
pub use fresnel::{fresnel_reflectance, normal_incidence_reflectance, Polarization};
pub use scatter::{tis_scatter_loss, tis_scatter_loss_with, RmsConvention};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CrystalAngle;
use crate::vec2::Vec2;

/// A material described by its complex refractive index n + ik at one
/// tabulated wavelength.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OpticalMaterial {
    pub name: String,
    /// Real part of the refractive index.
    pub refractive_index_real: f64,
    /// Imaginary part (extinction coefficient), >= 0.
    pub refractive_index_imag: f64,
    /// Wavelength the index pair is tabulated at, nm.
    pub at_wavelength_nm: f64,
}

impl OpticalMaterial {
    // The default constants are not measured by this toolkit; they are
    // editable config values taken from standard optical-constant
    // tabulations (Aspnes & Studna for crystalline Si, Palik's handbook
    // for evaporated Al) at the HeNe line.

    /// Crystalline silicon near 633 nm.
    pub fn silicon() -> Self {
        Self {
            name: "silicon".into(),
            refractive_index_real: 3.882,
            refractive_index_imag: 0.019,
            at_wavelength_nm: 633.0,
        }
    }

    /// Evaporated aluminum near 633 nm. A 100 nm film is optically opaque,
    /// so bulk constants apply.
    pub fn aluminum() -> Self {
        Self {
            name: "aluminum".into(),
            refractive_index_real: 1.374,
            refractive_index_imag: 7.62,
            at_wavelength_nm: 633.0,
        }
    }

    pub fn complex_index(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.refractive_index_real, self.refractive_index_imag)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.refractive_index_real > 0.0) {
            return Err(Error::Domain(format!(
                "refractive index real part must be positive, got {}",
                self.refractive_index_real
            )));
        }
        if self.refractive_index_imag < 0.0 {
            return Err(Error::Domain(format!(
                "extinction coefficient must be non-negative, got {}",
                self.refractive_index_imag
            )));
        }
        Ok(())
    }
}

/// The turning mirror: a (111) facet with a surface finish and an optional
/// coating.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MirrorSpec {
    pub material: OpticalMaterial,
    /// Facet tilt from the wafer surface; the (100)/(111) angle.
    #[serde(rename = "tilt_deg", default)]
    pub tilt: CrystalAngle,
    /// Arithmetic-mean roughness Ra, nm.
    pub roughness_ra_nm: f64,
    /// Coating thickness, nm; 0 for a bare facet.
    #[serde(default)]
    pub coating_thickness_nm: f64,
    /// Ra -> RMS conversion used for scatter estimates.
    #[serde(default)]
    pub rms_convention: RmsConvention,
    /// Usable facet extent along the slope, µm; None = unbounded (no
    /// clipping checks).
    #[serde(default)]
    pub facet_length_um: Option<f64>,
}

impl MirrorSpec {
    /// Bare-silicon facet at the default Ra of 4.1 nm.
    pub fn bare_silicon() -> Self {
        Self {
            material: OpticalMaterial::silicon(),
            tilt: CrystalAngle::si_100_111(),
            roughness_ra_nm: 4.1,
            coating_thickness_nm: 0.0,
            rms_convention: RmsConvention::default(),
            facet_length_um: None,
        }
    }

    /// 100 nm aluminum-coated facet at the default Ra of 4.1 nm.
    pub fn aluminum_coated() -> Self {
        Self {
            material: OpticalMaterial::aluminum(),
            coating_thickness_nm: 100.0,
            ..Self::bare_silicon()
        }
    }

    /// Incidence angle of a horizontal (groove-axis) ray on this facet,
    /// radians: 90° minus the tilt.
    pub fn axial_incidence(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 - self.tilt.radians()
    }

    /// Unit normal of the facet plane, pointing back toward the fiber.
    pub fn normal(&self) -> Vec2 {
        let t = self.tilt.radians();
        Vec2::new(-t.sin(), t.cos())
    }

    pub fn validate(&self) -> Result<()> {
        self.material.validate()?;
        if self.roughness_ra_nm < 0.0 {
            return Err(Error::Domain(format!(
                "roughness Ra must be non-negative, got {} nm",
                self.roughness_ra_nm
            )));
        }
        if self.coating_thickness_nm < 0.0 {
            return Err(Error::Domain(format!(
                "coating thickness must be non-negative, got {} nm",
                self.coating_thickness_nm
            )));
        }
        if let Some(len) = self.facet_length_um {
            if !(len > 0.0) {
                return Err(Error::Domain(format!(
                    "facet length must be positive, got {len} um"
                )));
            }
        }
        Ok(())
    }
}

/// A power-carrying ray in the cross-section plane (µm, y up).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Ray {
    pub origin: Vec2,
    pub direction: Vec2,
    pub power_uw: f64,
}

impl Ray {
    pub fn new(origin: Vec2, direction: Vec2, power_uw: f64) -> Result<Self> {
        if (direction.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "ray direction must be unit length, |d| = {}",
                direction.norm()
            )));
        }
        if power_uw < 0.0 {
            return Err(Error::Domain(format!(
                "ray power must be non-negative, got {power_uw} uW"
            )));
        }
        Ok(Self {
            origin,
            direction,
            power_uw,
        })
    }
}

/// Mirror reflection of a direction: `d' = d - 2 (d · n) n`.
pub fn reflect_direction(direction: Vec2, normal: Vec2) -> Vec2 {
    direction - normal.scale(2.0 * direction.dot(normal))
}

/// Bounce a ray off the mirror facet.
///
/// The facet plane passes through the coordinate origin with the mirror's
/// tilt; position rays relative to that convention. The reflected power is
/// the incident power times the unpolarized Fresnel reflectance at the
/// actual incidence angle and times (1 - TIS scatter loss), both evaluated
/// at the material's tabulated wavelength.
pub fn reflect_ray(ray: &Ray, mirror: &MirrorSpec) -> Result<Ray> {
    mirror.validate()?;
    let n = mirror.normal();
    let toward = ray.direction.dot(n);
    if toward.abs() < 1e-15 {
        return Err(Error::NoIntersection(
            "ray travels parallel to the mirror plane".into(),
        ));
    }
    if toward > 0.0 {
        return Err(Error::NoIntersection(
            "ray travels away from the mirror face".into(),
        ));
    }
    let s = -ray.origin.dot(n) / toward;
    if s < 0.0 {
        return Err(Error::NoIntersection(
            "mirror plane lies behind the ray origin".into(),
        ));
    }
    let hit = ray.origin + ray.direction.scale(s);
    let incidence = toward.abs().clamp(-1.0, 1.0).acos();
    let reflectance = fresnel_reflectance(&mirror.material, incidence, Polarization::Unpolarized)?;
    let scatter = tis_scatter_loss_with(
        mirror.roughness_ra_nm,
        incidence,
        mirror.material.at_wavelength_nm,
        mirror.rms_convention,
    )?;
    Ok(Ray {
        origin: hit,
        direction: reflect_direction(ray.direction, n),
        power_uw: ray.power_uw * reflectance * (1.0 - scatter),
    })
}
