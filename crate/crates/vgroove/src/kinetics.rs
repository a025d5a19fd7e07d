//! Arrhenius etch-rate model and etch planning.
//!
//! KOH etch rates on (100) silicon follow an Arrhenius law in absolute
//! temperature,
//!
//! ```text
//! R(T) = A exp(-B / T),    B = Ea / k
//! ```
//!
//! fitted here as a straight line of ln R against 1/T. Temperatures enter
//! in °C and are converted to kelvin internally; rates are µm/min
//! throughout. With exactly two points the fit is the closed-form
//! ln-ratio solution and the residual is zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;

/// 0 °C in kelvin.
pub const KELVIN_OFFSET: f64 = 273.15;

/// Default validity window for rate evaluation, °C.
pub const DEFAULT_WINDOW_C: (f64, f64) = (30.0, 100.0);

pub fn celsius_to_kelvin(t_c: f64) -> f64 {
    t_c + KELVIN_OFFSET
}

/// One measured (temperature, rate) point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub temp_c: f64,
    pub rate_um_min: f64,
}

impl RatePoint {
    pub fn new(temp_c: f64, rate_um_min: f64) -> Self {
        Self {
            temp_c,
            rate_um_min,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rate_um_min > 0.0) {
            return Err(Error::Domain(format!(
                "etch rate must be positive, got {} um/min",
                self.rate_um_min
            )));
        }
        if celsius_to_kelvin(self.temp_c) <= 0.0 {
            return Err(Error::Domain(format!(
                "temperature {} C is at or below absolute zero",
                self.temp_c
            )));
        }
        Ok(())
    }
}

/// Fitted Arrhenius model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EtchRateModel {
    /// Arrhenius prefactor `A`, µm/min.
    pub prefactor_um_min: f64,
    /// Activation temperature `B = Ea / k`, kelvin.
    #[serde(rename = "activation_K")]
    pub activation_k: f64,
    /// RMS of ln-rate residuals over the source points.
    pub residual: f64,
    /// Modelling assumptions carried with the fit.
    pub assumptions: Vec<String>,
    /// The points the model was fitted to.
    pub source_points: Vec<RatePoint>,
    /// Validity window for evaluation, °C; outside it results carry an
    /// extrapolation warning.
    #[serde(default = "default_window")]
    pub window_c: (f64, f64),
}

fn default_window() -> (f64, f64) {
    DEFAULT_WINDOW_C
}

/// A rate evaluation, possibly flagged as an extrapolation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateEstimate {
    pub rate_um_min: f64,
    /// Present when the requested temperature fell outside the model's
    /// validity window.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extrapolation_warning: Option<String>,
}

/// Least-squares Arrhenius fit of ln(rate) against 1/T.
pub fn fit_arrhenius(points: &[RatePoint]) -> Result<EtchRateModel> {
    for p in points {
        p.validate()?;
    }
    if points.len() < 2 {
        return Err(Error::Fit(format!(
            "Arrhenius fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    let xs: Vec<f64> = points
        .iter()
        .map(|p| 1.0 / celsius_to_kelvin(p.temp_c))
        .collect();
    let ys: Vec<f64> = points.iter().map(|p| p.rate_um_min.ln()).collect();
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit(
            "all points share one temperature; the fit is underdetermined".into(),
        ));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx; // = -B
    let intercept = mean_y - slope * mean_x; // = ln A
    let activation_k = -slope;
    let prefactor = intercept.exp();
    if !(activation_k > 0.0) {
        return Err(Error::Fit(format!(
            "fitted activation temperature {activation_k:.1} K is not positive; \
             rates must increase with temperature"
        )));
    }
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(EtchRateModel {
        prefactor_um_min: prefactor,
        activation_k,
        residual,
        assumptions: Vec::new(),
        source_points: points.to_vec(),
        window_c: DEFAULT_WINDOW_C,
    })
}

impl EtchRateModel {
    /// The model shipped as the 40 wt% KOH default: the two rate endpoints
    /// quoted for the process, 0.25 µm/min at 40 °C and 2.0 µm/min at
    /// 90 °C. The pairing of the lowest rate with the lowest temperature
    /// is recorded as an assumption.
    pub fn default_koh_40wt() -> Self {
        let pts = [RatePoint::new(40.0, 0.25), RatePoint::new(90.0, 2.0)];
        let mut model = fit_arrhenius(&pts).expect("two distinct points always fit");
        model.assumptions = vec![
            "rate endpoints 0.25 and 2.0 um/min paired with 40 and 90 C \
             respectively (min rate at min temperature)"
                .to_string(),
            "Arrhenius temperature dependence assumed for 40 wt% KOH on (100) silicon".to_string(),
        ];
        model
    }

    /// Evaluate `A exp(-B/T)` at `temp_c`, flagging extrapolation outside
    /// the validity window instead of failing.
    pub fn rate_at(&self, temp_c: f64) -> Result<RateEstimate> {
        let t_k = celsius_to_kelvin(temp_c);
        if t_k <= 0.0 {
            return Err(Error::Domain(format!(
                "temperature {temp_c} C is at or below absolute zero"
            )));
        }
        let rate = self.prefactor_um_min * (-self.activation_k / t_k).exp();
        let (lo, hi) = self.window_c;
        let warning = if temp_c < lo || temp_c > hi {
            Some(format!(
                "temperature {temp_c} C lies outside the validity window \
                 {lo}..{hi} C; the rate is an extrapolation"
            ))
        } else {
            None
        };
        Ok(RateEstimate {
            rate_um_min: rate,
            extrapolation_warning: warning,
        })
    }

    /// Minutes to etch `target_depth_um` at `temp_c` under
    /// `mask_opening_um`. Targets beyond the self-limit are refused with
    /// the limit named.
    pub fn plan_etch(
        &self,
        target_depth_um: f64,
        temp_c: f64,
        mask_opening_um: f64,
    ) -> Result<f64> {
        if !(target_depth_um > 0.0) {
            return Err(Error::Domain(format!(
                "target depth must be positive, got {target_depth_um} um"
            )));
        }
        let limit = geometry::self_limit_depth(mask_opening_um)?;
        if target_depth_um > limit {
            return Err(Error::UnreachableDepth {
                target_um: target_depth_um,
                limit_um: limit,
                mask_opening_um,
            });
        }
        let rate = self.rate_at(temp_c)?.rate_um_min;
        Ok(target_depth_um / rate)
    }

    /// Depth reached after `duration_min` at `temp_c`, clamped at the mask
    /// opening's self-limit.
    pub fn depth_after(&self, temp_c: f64, duration_min: f64, mask_opening_um: f64) -> Result<f64> {
        if duration_min < 0.0 {
            return Err(Error::Domain(format!(
                "duration must be non-negative, got {duration_min} min"
            )));
        }
        let limit = geometry::self_limit_depth(mask_opening_um)?;
        let rate = self.rate_at(temp_c)?.rate_um_min;
        Ok((rate * duration_min).min(limit))
    }
}
