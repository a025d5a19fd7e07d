//! Chained power budget from fiber output to detector, and the capture
//! factor fitted from measured (P1, P2) pairs.
//!
//! The chain is deliberately short: Fresnel reflectance at the actual
//! incidence, TIS scatter survival, and one capture factor soaking up
//! everything the model does not resolve (detector solid angle, alignment,
//! Fresnel at the fiber end face). The fit reports residuals so the
//! adequacy of that single factor can be judged.

use serde::{Deserialize, Serialize};

use super::{fresnel_reflectance, tis_scatter_loss_with, MirrorSpec, Polarization};
use crate::error::{Error, Result};
use crate::geometry::FiberSpec;

/// One reflectivity measurement: power into the mirror and power at the
/// detector.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PowerMeasurement {
    pub p1_uw: f64,
    pub p2_uw: f64,
}

/// The factor chain and its prediction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerBudget {
    pub input_power_uw: f64,
    /// Unpolarized Fresnel reflectance at the axial incidence.
    pub fresnel_factor: f64,
    /// TIS survival, 1 - loss.
    pub scatter_factor: f64,
    /// Fitted or assumed capture factor.
    pub capture_factor: f64,
    pub predicted_output_uw: f64,
    /// predicted_output / input: the predicted P2/P1.
    pub predicted_reflectivity: f64,
}

impl PowerBudget {
    /// Where the incident power went: (delivered, absorbed at the mirror,
    /// scattered off-specular, uncaptured at the detector). Sums to the
    /// input power.
    pub fn energy_parts_uw(&self) -> (f64, f64, f64, f64) {
        let p1 = self.input_power_uw;
        let absorbed = p1 * (1.0 - self.fresnel_factor);
        let scattered = p1 * self.fresnel_factor * (1.0 - self.scatter_factor);
        let uncaptured =
            p1 * self.fresnel_factor * self.scatter_factor * (1.0 - self.capture_factor);
        (self.predicted_output_uw, absorbed, scattered, uncaptured)
    }
}

/// Result of the capture-factor fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaptureFit {
    pub capture_factor: f64,
    /// Fresnel × scatter product the fit was conditioned on.
    pub physical_factor: f64,
    /// Per-measurement prediction errors, µW.
    pub residuals_uw: Vec<f64>,
    /// RMS of the residuals, µW.
    pub rms_residual_uw: f64,
}

fn physical_factor(mirror: &MirrorSpec, wavelength_nm: f64) -> Result<f64> {
    let incidence = mirror.axial_incidence();
    let fresnel = fresnel_reflectance(&mirror.material, incidence, Polarization::Unpolarized)?;
    let scatter = 1.0
        - tis_scatter_loss_with(
            mirror.roughness_ra_nm,
            incidence,
            wavelength_nm,
            mirror.rms_convention,
        )?;
    Ok(fresnel * scatter)
}

/// Chain the loss factors for `input_power_uw` arriving along the groove
/// axis.
pub fn power_budget(
    fiber: &FiberSpec,
    mirror: &MirrorSpec,
    capture_factor: f64,
    input_power_uw: f64,
) -> Result<PowerBudget> {
    fiber.validate()?;
    mirror.validate()?;
    if !(0.0..=1.0).contains(&capture_factor) {
        return Err(Error::Domain(format!(
            "capture factor must lie in [0, 1], got {capture_factor}"
        )));
    }
    if input_power_uw < 0.0 {
        return Err(Error::Domain(format!(
            "input power must be non-negative, got {input_power_uw} uW"
        )));
    }
    let incidence = mirror.axial_incidence();
    let fresnel = fresnel_reflectance(&mirror.material, incidence, Polarization::Unpolarized)?;
    let scatter = 1.0
        - tis_scatter_loss_with(
            mirror.roughness_ra_nm,
            incidence,
            fiber.wavelength_nm,
            mirror.rms_convention,
        )?;
    let reflectivity = fresnel * scatter * capture_factor;
    Ok(PowerBudget {
        input_power_uw,
        fresnel_factor: fresnel,
        scatter_factor: scatter,
        capture_factor,
        predicted_output_uw: input_power_uw * reflectivity,
        predicted_reflectivity: reflectivity,
    })
}

/// Least-squares capture factor over measured (P1, P2) pairs:
/// the scalar c minimizing Σ (P2 - P1 · φ · c)² with φ the physical
/// Fresnel × scatter product of the mirror.
pub fn fit_capture_factor(
    measurements: &[PowerMeasurement],
    mirror: &MirrorSpec,
    wavelength_nm: f64,
) -> Result<CaptureFit> {
    mirror.validate()?;
    if measurements.is_empty() {
        return Err(Error::Fit(
            "capture-factor fit needs at least one measurement".into(),
        ));
    }
    let phi = physical_factor(mirror, wavelength_nm)?;
    for m in measurements {
        if !(m.p1_uw > 0.0) {
            return Err(Error::Domain(format!(
                "input power must be positive, got {} uW",
                m.p1_uw
            )));
        }
        if m.p2_uw < 0.0 {
            return Err(Error::Domain(format!(
                "output power must be non-negative, got {} uW",
                m.p2_uw
            )));
        }
        if m.p2_uw > m.p1_uw {
            // Passive optics cannot gain power; report the implied factor.
            return Err(Error::ModelDeficit {
                implied: m.p2_uw / (m.p1_uw * phi),
            });
        }
    }
    let num: f64 = measurements.iter().map(|m| m.p1_uw * phi * m.p2_uw).sum();
    let den: f64 = measurements.iter().map(|m| (m.p1_uw * phi).powi(2)).sum();
    let c = num / den;
    if c > 1.0 + 1e-12 {
        return Err(Error::ModelDeficit { implied: c });
    }
    let c = c.min(1.0);
    let residuals: Vec<f64> = measurements
        .iter()
        .map(|m| m.p2_uw - m.p1_uw * phi * c)
        .collect();
    let rms = (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt();
    Ok(CaptureFit {
        capture_factor: c,
        physical_factor: phi,
        residuals_uw: residuals,
        rms_residual_uw: rms,
    })
}
