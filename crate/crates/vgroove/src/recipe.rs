//! Declarative process-flow model, validation, and traveler rendering.
//!
//! A flow is an ordered list of [`ProcessStep`]s; the anodic-bond schedule
//! is carried separately as a [`BondRecipe`]. Validation never throws:
//! every problem becomes a [`Violation`] in a deterministic, ordered
//! report, so a run sheet can be reviewed in one pass.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use crate::kinetics::EtchRateModel;

/// Step categories for the V-groove platform flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Oxidation,
    Lithography,
    Develop,
    OxideEtch,
    ResistStrip,
    KohEtch,
    OxideStrip,
    Metallization,
    Clean,
    Bond,
}

impl StepKind {
    pub fn label(self) -> &'static str {
        match self {
            StepKind::Oxidation => "oxidation",
            StepKind::Lithography => "lithography",
            StepKind::Develop => "develop",
            StepKind::OxideEtch => "oxide_etch",
            StepKind::ResistStrip => "resist_strip",
            StepKind::KohEtch => "koh_etch",
            StepKind::OxideStrip => "oxide_strip",
            StepKind::Metallization => "metallization",
            StepKind::Clean => "clean",
            StepKind::Bond => "bond",
        }
    }

    /// Parameter keys that must be present with positive numeric values.
    fn required_numeric(self) -> &'static [&'static str] {
        match self {
            StepKind::Oxidation => &["thickness_um", "temp_c"],
            StepKind::Lithography => &["mask_opening_um"],
            StepKind::Develop => &["time_s"],
            StepKind::OxideEtch => &["time_min"],
            StepKind::ResistStrip => &[],
            StepKind::KohEtch => &["koh_wt_pct", "temp_c", "time_min"],
            StepKind::OxideStrip => &["time_min"],
            StepKind::Metallization => &["thickness_nm"],
            StepKind::Clean => &[],
            StepKind::Bond => &["voltage_v", "temp_c", "time_min"],
        }
    }
}

/// A step parameter: numeric values carry unit-suffixed keys, text values
/// name agents and methods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Text(String),
}

impl ParamValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            ParamValue::Number(x) => Some(*x),
            ParamValue::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            ParamValue::Number(_) => None,
            ParamValue::Text(s) => Some(s),
        }
    }
}

impl std::fmt::Display for ParamValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamValue::Number(x) => write!(f, "{x}"),
            ParamValue::Text(s) => write!(f, "{s}"),
        }
    }
}

/// One fabrication step.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProcessStep {
    pub kind: StepKind,
    /// Unit-suffixed parameter map (sorted; rendering is deterministic).
    #[serde(default)]
    pub parameters: BTreeMap<String, ParamValue>,
    /// Step duration where it is not already a parameter, min.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub duration_min: Option<f64>,
    /// Step temperature where it is not already a parameter, °C.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub temperature_c: Option<f64>,
}

impl ProcessStep {
    pub fn new(kind: StepKind) -> Self {
        Self {
            kind,
            parameters: BTreeMap::new(),
            duration_min: None,
            temperature_c: None,
        }
    }

    pub fn with_number(mut self, key: &str, value: f64) -> Self {
        self.parameters
            .insert(key.to_string(), ParamValue::Number(value));
        self
    }

    pub fn with_text(mut self, key: &str, value: &str) -> Self {
        self.parameters
            .insert(key.to_string(), ParamValue::Text(value.to_string()));
        self
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        self.parameters.get(key).and_then(ParamValue::as_number)
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.parameters.get(key).and_then(ParamValue::as_text)
    }
}

/// Anodic-bond schedule.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BondRecipe {
    pub voltage_v: f64,
    pub stage_temperature_c: f64,
    pub counterpoise_mass_g: f64,
    pub bond_time_min: f64,
    pub clean_sequence: Vec<ProcessStep>,
}

impl BondRecipe {
    /// The qualified schedule: 700 V on a 500 °C stage, 48 g counterpoise
    /// for 40 min, preceded by the DI / piranha / rinse / dry sequence.
    pub fn reference_48g() -> Self {
        Self {
            voltage_v: 700.0,
            stage_temperature_c: 500.0,
            counterpoise_mass_g: 48.0,
            bond_time_min: 40.0,
            clean_sequence: reference_clean_sequence(),
        }
    }

    /// The heavier-counterpoise variant: 80 g for 20 min.
    pub fn reference_80g() -> Self {
        Self {
            counterpoise_mass_g: 80.0,
            bond_time_min: 20.0,
            ..Self::reference_48g()
        }
    }
}

/// DI wipe, piranha dip, DI rinse, nitrogen dry.
pub fn reference_clean_sequence() -> Vec<ProcessStep> {
    vec![
        ProcessStep::new(StepKind::Clean).with_text("agent", "di_water"),
        ProcessStep::new(StepKind::Clean)
            .with_text("agent", "piranha")
            .with_number("h2so4_ml", 300.0)
            .with_number("h2o2_ml", 100.0)
            .with_number("temp_c", 80.0)
            .with_number("time_min", 20.0),
        ProcessStep::new(StepKind::Clean)
            .with_text("agent", "di_rinse")
            .with_number("time_min", 1.0),
        ProcessStep::new(StepKind::Clean).with_text("agent", "n2_dry"),
    ]
}

/// The v-groove platform flow: oxidation mask, patterning, KOH etch,
/// strip, aluminum coating.
pub fn reference_flow() -> Vec<ProcessStep> {
    vec![
        ProcessStep::new(StepKind::Oxidation)
            .with_number("thickness_um", 1.0)
            .with_number("temp_c", 1100.0)
            .with_text("ambient", "wet"),
        ProcessStep::new(StepKind::Lithography)
            .with_number("mask_opening_um", 250.0)
            .with_text("resist", "positive"),
        ProcessStep::new(StepKind::Develop).with_number("time_s", 60.0),
        ProcessStep::new(StepKind::OxideEtch)
            .with_text("etchant", "BOE")
            .with_number("time_min", 10.0),
        ProcessStep::new(StepKind::ResistStrip).with_text("solvent", "acetone"),
        ProcessStep::new(StepKind::KohEtch)
            .with_number("koh_wt_pct", 40.0)
            .with_number("temp_c", 70.0)
            .with_number("time_min", 184.0)
            .with_number("target_depth_um", 170.75)
            .with_number("mask_opening_um", 250.0)
            .with_text("agitation", "magnetic_stirring"),
        ProcessStep::new(StepKind::OxideStrip)
            .with_text("etchant", "BOE")
            .with_number("time_min", 10.0),
        ProcessStep::new(StepKind::Metallization)
            .with_text("material", "aluminum")
            .with_text("method", "thermal_evaporation")
            .with_number("thickness_nm", 100.0),
    ]
}

/// Tunable validation limits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationOptions {
    /// Allowed anodic-bond voltage window, V.
    pub voltage_window_v: (f64, f64),
    /// Allowed stage-temperature window, °C.
    pub stage_temp_window_c: (f64, f64),
    /// Qualified (counterpoise g, bond min) pairs. Combinations outside
    /// this table are refused rather than extrapolated.
    pub counterpoise_table: Vec<(f64, f64)>,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        // ±15% around the qualified 700 V / 500 °C operating point.
        Self {
            voltage_window_v: (700.0 * 0.85, 700.0 * 1.15),
            stage_temp_window_c: (500.0 * 0.85, 500.0 * 1.15),
            counterpoise_table: vec![(48.0, 40.0), (80.0, 20.0)],
        }
    }
}

/// One validation finding.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Violation {
    /// Index of the offending step, where one step is at fault.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_index: Option<usize>,
    /// Stable machine-readable code.
    pub code: String,
    pub message: String,
}

/// Ordered list of violations; empty means the recipe is clean.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, step_index: Option<usize>, code: &str, message: String) {
        self.violations.push(Violation {
            step_index,
            code: code.to_string(),
            message,
        });
    }

    /// Merge another report after this one, preserving order.
    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.passed() {
            return write!(f, "ok: no violations");
        }
        for v in &self.violations {
            match v.step_index {
                Some(i) => writeln!(f, "step {}: [{}] {}", i + 1, v.code, v.message)?,
                None => writeln!(f, "[{}] {}", v.code, v.message)?,
            }
        }
        Ok(())
    }
}

/// Validate a fabrication flow: parameter completeness, ordering, and
/// the achievability of the KOH etch against the rate model.
pub fn validate_flow(steps: &[ProcessStep], model: &EtchRateModel) -> ValidationReport {
    let mut report = ValidationReport::default();
    if steps.is_empty() {
        report.push(None, "empty_flow", "flow contains no steps".into());
        return report;
    }

    for (i, step) in steps.iter().enumerate() {
        for key in step.kind.required_numeric() {
            match step.number(key) {
                None => report.push(
                    Some(i),
                    "missing_parameter",
                    format!(
                        "{} step lacks required parameter '{key}'",
                        step.kind.label()
                    ),
                ),
                Some(v) if !(v > 0.0) => report.push(
                    Some(i),
                    "non_positive_parameter",
                    format!(
                        "{} step parameter '{key}' must be positive, got {v}",
                        step.kind.label()
                    ),
                ),
                Some(_) => {}
            }
        }
    }

    // Ordering: each (before, after) pair must appear in that order when
    // both kinds are present.
    let first_index = |kind: StepKind| steps.iter().position(|s| s.kind == kind);
    let order_pairs = [
        (StepKind::Oxidation, StepKind::Lithography),
        (StepKind::Lithography, StepKind::Develop),
        (StepKind::Develop, StepKind::OxideEtch),
        (StepKind::OxideEtch, StepKind::KohEtch),
        (StepKind::KohEtch, StepKind::OxideStrip),
        (StepKind::OxideStrip, StepKind::Metallization),
    ];
    for (before, after) in order_pairs {
        if let (Some(b), Some(a)) = (first_index(before), first_index(after)) {
            if b > a {
                report.push(
                    Some(a),
                    "ordering",
                    format!("{} must come before {}", before.label(), after.label()),
                );
            }
        }
    }

    // KOH achievability: target depth vs the mask opening's self-limit,
    // and the planned time at the stated temperature.
    for (i, step) in steps.iter().enumerate() {
        if step.kind != StepKind::KohEtch {
            continue;
        }
        let (Some(target), Some(opening)) = (
            step.number("target_depth_um"),
            step.number("mask_opening_um"),
        ) else {
            continue;
        };
        let Some(temp) = step.number("temp_c") else {
            continue;
        };
        match model.plan_etch(target, temp, opening) {
            Err(Error::UnreachableDepth { limit_um, .. }) => report.push(
                Some(i),
                "unreachable_depth",
                format!(
                    "target depth {target} um exceeds the {limit_um:.1} um \
                     self-limit of a {opening} um mask opening"
                ),
            ),
            Err(e) => report.push(Some(i), "etch_plan", e.to_string()),
            Ok(planned_min) => {
                if let Some(time) = step.number("time_min") {
                    // A stated etch time more than 25% short of the plan
                    // cannot reach the target depth.
                    if time < planned_min * 0.75 {
                        report.push(
                            Some(i),
                            "insufficient_etch_time",
                            format!(
                                "{time} min at {temp} C reaches only part of the \
                                 {target} um target (plan: {planned_min:.0} min)"
                            ),
                        );
                    }
                }
            }
        }
    }
    report
}

/// Validate a bond schedule against the safe windows and the qualified
/// counterpoise table.
pub fn validate_bond(recipe: &BondRecipe, options: &ValidationOptions) -> ValidationReport {
    let mut report = ValidationReport::default();

    if !(recipe.voltage_v > 0.0) {
        report.push(
            None,
            "non_positive_voltage",
            format!("bond voltage must be positive, got {} V", recipe.voltage_v),
        );
    } else {
        let (lo, hi) = options.voltage_window_v;
        if recipe.voltage_v < lo || recipe.voltage_v > hi {
            report.push(
                None,
                "voltage_window",
                format!(
                    "bond voltage {} V outside the safe window {lo:.0}..{hi:.0} V",
                    recipe.voltage_v
                ),
            );
        }
    }

    let (lo, hi) = options.stage_temp_window_c;
    if recipe.stage_temperature_c < lo || recipe.stage_temperature_c > hi {
        report.push(
            None,
            "stage_temp_window",
            format!(
                "stage temperature {} C outside the safe window {lo:.0}..{hi:.0} C",
                recipe.stage_temperature_c
            ),
        );
    }

    if !(recipe.bond_time_min > 0.0) {
        report.push(
            None,
            "non_positive_bond_time",
            format!(
                "bond time must be positive, got {} min",
                recipe.bond_time_min
            ),
        );
    }

    let matched = options.counterpoise_table.iter().any(|&(mass, time)| {
        (recipe.counterpoise_mass_g - mass).abs() < 1e-9
            && (recipe.bond_time_min - time).abs() < 1e-9
    });
    if !matched && recipe.bond_time_min > 0.0 {
        report.push(
            None,
            "unqualified_counterpoise",
            format!(
                "({} g, {} min) matches no qualified counterpoise/time pair; \
                 the mass-time relation is not modelled, so qualify the pair \
                 explicitly instead of extrapolating",
                recipe.counterpoise_mass_g, recipe.bond_time_min
            ),
        );
    }

    if recipe.clean_sequence.is_empty() {
        report.push(None, "missing_clean", "clean sequence is empty".into());
        return report;
    }

    // Require clean -> rinse -> dry in order.
    let agent_index = |names: &[&str]| {
        recipe.clean_sequence.iter().position(|s| {
            s.kind == StepKind::Clean && s.text("agent").is_some_and(|a| names.contains(&a))
        })
    };
    let clean_at = agent_index(&["piranha", "di_water"]);
    let rinse_at = agent_index(&["di_rinse", "rinse"]);
    let dry_at = agent_index(&["n2_dry", "dry"]);
    match (clean_at, rinse_at, dry_at) {
        (None, _, _) => report.push(
            None,
            "missing_clean",
            "clean sequence lacks a cleaning step (piranha or di_water)".into(),
        ),
        (_, None, _) => report.push(
            None,
            "missing_rinse",
            "clean sequence lacks a rinse step".into(),
        ),
        (_, _, None) => report.push(
            None,
            "missing_dry",
            "clean sequence lacks a drying step".into(),
        ),
        (Some(c), Some(r), Some(d)) => {
            if !(c < r && r < d) {
                report.push(
                    None,
                    "clean_order",
                    "clean sequence must run clean, then rinse, then dry".into(),
                );
            }
        }
    }
    report
}

/// Render a deterministic markdown traveler for a validated flow.
///
/// Refuses when validation failed unless `force` is set; the refusal
/// carries the violation count, and the caller already has the report.
pub fn render_traveler(
    steps: &[ProcessStep],
    bond: &BondRecipe,
    model: &EtchRateModel,
    options: &ValidationOptions,
    force: bool,
) -> Result<String> {
    if steps.is_empty() {
        return Err(Error::Domain("traveler needs at least one step".into()));
    }
    let mut report = validate_flow(steps, model);
    report.extend(validate_bond(bond, options));
    if !report.passed() && !force {
        return Err(Error::ValidationFailed {
            violation_count: report.violations.len(),
        });
    }

    let mut out = String::new();
    out.push_str("# Process traveler: V-groove fiber platform\n\n");
    out.push_str("## Fabrication flow\n\n");
    for (i, step) in steps.iter().enumerate() {
        out.push_str(&format!("{}. **{}**", i + 1, step.kind.label()));
        if let Some(t) = step.temperature_c {
            out.push_str(&format!(" @ {t} C"));
        }
        if let Some(d) = step.duration_min {
            out.push_str(&format!(", {d} min"));
        }
        out.push('\n');
        for (key, value) in &step.parameters {
            out.push_str(&format!("   - {key}: {value}\n"));
        }
    }
    out.push_str("\n## Anodic bonding\n\n");
    out.push_str(&format!("- voltage_v: {}\n", bond.voltage_v));
    out.push_str(&format!(
        "- stage_temperature_c: {}\n",
        bond.stage_temperature_c
    ));
    out.push_str(&format!(
        "- counterpoise_mass_g: {}\n",
        bond.counterpoise_mass_g
    ));
    out.push_str(&format!("- bond_time_min: {}\n", bond.bond_time_min));
    out.push_str("\n### Pre-bond clean\n\n");
    for (i, step) in bond.clean_sequence.iter().enumerate() {
        out.push_str(&format!("{}. ", i + 1));
        let agent = step.text("agent").unwrap_or("clean");
        out.push_str(agent);
        for (key, value) in &step.parameters {
            if key != "agent" {
                out.push_str(&format!(", {key} {value}"));
            }
        }
        out.push('\n');
    }
    if !report.passed() {
        out.push_str("\n## Validation findings (rendered with force)\n\n");
        for v in &report.violations {
            out.push_str(&format!("- [{}] {}\n", v.code, v.message));
        }
    }
    Ok(out)
}
