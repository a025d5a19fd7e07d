//! Total-integrated-scatter loss from surface roughness.
//!
//! For RMS roughness σ small against the wavelength, the fraction of
//! specularly reflected power lost to scatter is
//!
//! ```text
//! TIS = 1 - exp(-(4 π σ cos i / λ)²)
//! ```
//!
//! Profilometry reports Ra rather than σ; the conversion is selectable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How to derive RMS roughness from a measured Ra.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RmsConvention {
    /// σ = Ra. The conservative identity used when the height statistics
    /// are unknown.
    #[default]
    RaIdentity,
    /// σ = 1.11 Ra, exact for Gaussian-distributed heights.
    GaussianHeights,
}

impl RmsConvention {
    pub fn sigma_from_ra(self, ra_nm: f64) -> f64 {
        match self {
            RmsConvention::RaIdentity => ra_nm,
            RmsConvention::GaussianHeights => 1.11 * ra_nm,
        }
    }
}

/// TIS loss fraction with the default σ = Ra convention.
pub fn tis_scatter_loss(
    roughness_ra_nm: f64,
    incidence_rad: f64,
    wavelength_nm: f64,
) -> Result<f64> {
    tis_scatter_loss_with(
        roughness_ra_nm,
        incidence_rad,
        wavelength_nm,
        RmsConvention::RaIdentity,
    )
}

/// TIS loss fraction with an explicit Ra → RMS convention.
pub fn tis_scatter_loss_with(
    roughness_ra_nm: f64,
    incidence_rad: f64,
    wavelength_nm: f64,
    convention: RmsConvention,
) -> Result<f64> {
    if !(wavelength_nm > 0.0) {
        return Err(Error::Domain(format!(
            "wavelength must be positive, got {wavelength_nm} nm"
        )));
    }
    if roughness_ra_nm < 0.0 {
        return Err(Error::Domain(format!(
            "roughness Ra must be non-negative, got {roughness_ra_nm} nm"
        )));
    }
    let sigma = convention.sigma_from_ra(roughness_ra_nm);
    let phase = 4.0 * std::f64::consts::PI * sigma * incidence_rad.cos() / wavelength_nm;
    Ok(1.0 - (-(phase * phase)).exp())
}
