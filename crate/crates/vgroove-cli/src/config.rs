//! Platform configuration file: the assembled system a `trace` run
//! evaluates.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vgroove::geometry::{FiberSpec, GrooveDesign};
use vgroove::kinetics::EtchRateModel;
use vgroove::optics::MirrorSpec;

use crate::errors::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlatformConfig {
    pub fiber: FiberSpec,
    pub groove: GrooveDesign,
    pub mirror: MirrorSpec,
    /// Detector plane height above the mirror hit point, µm.
    pub detector_height_um: f64,
    /// Detector aperture radius, µm.
    pub detector_aperture_um: f64,
    /// Fiber end-face standoff from the mirror hit point, µm.
    #[serde(default = "default_standoff")]
    pub fiber_standoff_um: f64,
    /// Detector capture factor; fit it with `budget` and paste it here.
    #[serde(default = "default_capture")]
    pub capture_factor: f64,
    /// Source power at the fiber output, µW.
    #[serde(default = "default_power")]
    pub input_power_uw: f64,
    /// Inline etch-rate model.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kinetics_model: Option<EtchRateModel>,
    /// Path to an etch-rate model JSON, resolved relative to the config
    /// file; must exist at load time.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kinetics_model_path: Option<PathBuf>,
}

fn default_standoff() -> f64 {
    100.0
}

fn default_capture() -> f64 {
    1.0
}

fn default_power() -> f64 {
    1.0
}

impl PlatformConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
        let config: PlatformConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
        config.validate(path)?;
        Ok(config)
    }

    fn validate(&self, origin: &Path) -> CliResult<()> {
        self.fiber.validate().map_err(CliError::from)?;
        self.groove.validate().map_err(CliError::from)?;
        self.mirror.validate().map_err(CliError::from)?;
        if !(self.detector_height_um > 0.0) {
            return Err(CliError::Domain(format!(
                "detector height must be positive, got {} um",
                self.detector_height_um
            )));
        }
        if !(self.detector_aperture_um > 0.0) {
            return Err(CliError::Domain(format!(
                "detector aperture must be positive, got {} um",
                self.detector_aperture_um
            )));
        }
        if !(0.0..=1.0).contains(&self.capture_factor) {
            return Err(CliError::Domain(format!(
                "capture factor must lie in [0, 1], got {}",
                self.capture_factor
            )));
        }
        if let Some(rel) = &self.kinetics_model_path {
            let resolved = origin.parent().unwrap_or(Path::new(".")).join(rel);
            if !resolved.exists() {
                return Err(CliError::Malformed(format!(
                    "kinetics model file {} does not exist",
                    resolved.display()
                )));
            }
        }
        Ok(())
    }

    /// The etch-rate model: inline takes precedence, then the referenced
    /// file, then the shipped 40 wt% KOH default.
    pub fn kinetics(&self, origin: &Path) -> CliResult<EtchRateModel> {
        if let Some(model) = &self.kinetics_model {
            return Ok(model.clone());
        }
        if let Some(rel) = &self.kinetics_model_path {
            let resolved = origin.parent().unwrap_or(Path::new(".")).join(rel);
            let text = std::fs::read_to_string(&resolved)
                .map_err(|e| CliError::Malformed(format!("{}: {e}", resolved.display())))?;
            return serde_json::from_str(&text)
                .map_err(|e| CliError::Malformed(format!("{}: {e}", resolved.display())));
        }
        Ok(EtchRateModel::default_koh_40wt())
    }
}
