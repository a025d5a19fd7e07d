//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured values (run with `--nocapture` to see them all).

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use vgroove::etchsim::{profile_metrics, simulate_profile, wall_angle, EtchConfig};
use vgroove::geometry::{CrystalAngle, FiberSpec};
use vgroove::kinetics::EtchRateModel;
use vgroove::optics::{
    fit_capture_factor, fresnel_reflectance, power_budget, reflect_direction, tis_scatter_loss,
    MirrorSpec, OpticalMaterial, Polarization, PowerMeasurement,
};
use vgroove::recipe::{
    reference_flow, validate_bond, validate_flow, BondRecipe, ValidationOptions,
};
use vgroove::vec2::Vec2;

const COATED_SAMPLES: [(f64, f64); 3] = [(0.9234, 0.6602), (1.0191, 0.7094), (0.9531, 0.6871)];

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_vgroove")
}

fn fiber() -> FiberSpec {
    FiberSpec::default_multimode()
}

/// Independent inscribed-circle oracle: bisection on the tangency of a
/// circle centered at (0, h) against the wall line through the apex with
/// direction (cos θ, sin θ), using the cross-product point-line distance.
fn oracle_seat_depth(r: f64) -> f64 {
    let theta = CrystalAngle::si_100_111().radians();
    let (sin_t, cos_t) = theta.sin_cos();
    let dist = |px: f64, py: f64| (px * sin_t - py * cos_t).abs();
    let (mut lo, mut hi) = (0.0_f64, 100.0 * r);
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if dist(0.0, mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / 2.0 + r
}

#[test]
fn criterion_1_geometry_reproduction() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let output = Command::new(bin())
        .args(["design", "--fiber-radius-um", "62.5", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    let elapsed = started.elapsed();
    assert!(output.status.success());
    let json: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    let depth = json["groove"]["depth_um"].as_f64().unwrap();

    assert!((depth - 172.0).abs() <= 2.0, "depth {depth} vs quoted 172");
    let oracle = oracle_seat_depth(62.5);
    assert!(
        (depth - oracle).abs() <= 1e-9 * oracle,
        "depth {depth} vs inscribed-circle oracle {oracle}"
    );
    assert!((depth - 62.5 * (1.0 + 3.0_f64.sqrt())).abs() <= 1e-9 * depth);
    assert!(elapsed.as_secs_f64() < 1.0, "design took {:?}", elapsed);
    println!(
        "ACCEPTANCE criterion 1 PASS: design depth {depth:.6} um \
         (quoted 172 ± 2, oracle {oracle:.6}), runtime {elapsed:?}"
    );
}

#[test]
fn criterion_2_kinetics_endpoints() {
    let model = EtchRateModel::default_koh_40wt();
    let r90 = model.rate_at(90.0).unwrap().rate_um_min;
    let r40 = model.rate_at(40.0).unwrap().rate_um_min;
    assert!((r90 - 2.0).abs() <= 1e-9 * 2.0, "rate(90) = {r90}");
    assert!((r40 - 0.25).abs() <= 1e-9 * 0.25, "rate(40) = {r40}");

    let mut prev = model.rate_at(30.0).unwrap().rate_um_min;
    for t in 31..=100 {
        let rate = model.rate_at(t as f64).unwrap().rate_um_min;
        assert!(
            rate > prev && rate.is_finite() && rate > 0.0,
            "rate not strictly increasing at {t} C"
        );
        prev = rate;
    }
    println!(
        "ACCEPTANCE criterion 2 PASS: rate(90 C) = {r90} um/min, \
         rate(40 C) = {r40} um/min, strictly increasing over 30..100 C"
    );
}

#[test]
fn criterion_3_etch_simulation_convergence() {
    let started = Instant::now();
    let model = EtchRateModel::default_koh_40wt();
    let rate = model.rate_at(70.0).unwrap().rate_um_min;

    // Long-duration convergence at default resolution; the small ratio
    // keeps the residual (111) creep inside the ideal-limit window.
    let config = EtchConfig {
        anisotropy_ratio: 0.002,
        ..EtchConfig::new(250.0, rate, 250.0)
    };
    let profile = simulate_profile(&config).unwrap();
    let t_end = *profile.timestamps_min.last().unwrap();
    let depth = profile_metrics(&profile, t_end).unwrap().depth_um;
    let ideal = 250.0 / 2.0_f64.sqrt();
    assert!(
        (depth - ideal).abs() <= 0.01 * ideal,
        "final depth {depth} vs {ideal} ± 1%"
    );
    let angle = wall_angle(&profile, t_end).unwrap().to_degrees();
    assert!((angle - 54.74).abs() <= 0.5, "wall angle {angle}");

    // Pre-limit depth tracks rate · time within one cell.
    for (i, &t) in profile.timestamps_min.iter().enumerate() {
        if rate * t < 0.9 * ideal {
            let d = profile.surfaces[i].iter().map(|p| -p.y).fold(0.0, f64::max);
            assert!(
                (d - rate * t).abs() <= config.cell_size_um,
                "t = {t}: {d} vs {}",
                rate * t
            );
        }
    }

    // Halving the grid moves the final depth by under 0.5%.
    let fine = EtchConfig {
        cell_size_um: 0.5,
        ..config.clone()
    };
    let fine_profile = simulate_profile(&fine).unwrap();
    let fine_end = *fine_profile.timestamps_min.last().unwrap();
    let fine_depth = profile_metrics(&fine_profile, fine_end).unwrap().depth_um;
    assert!((fine_depth - depth).abs() <= 0.005 * depth);

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "simulation took {elapsed:?}");
    println!(
        "ACCEPTANCE criterion 3 PASS: depth {depth:.3} um (ideal {ideal:.3} ± 1%), \
         wall angle {angle:.3} deg, refinement delta {:.4}%, runtime {elapsed:?}",
        100.0 * (fine_depth - depth).abs() / depth
    );
}

#[test]
fn criterion_4_fresnel_oracle_equivalence() {
    let cases = [
        (OpticalMaterial::silicon(), 3.882, 0.019),
        (OpticalMaterial::aluminum(), 1.374, 7.62),
    ];
    for (material, n, k) in &cases {
        let computed = fresnel_reflectance(material, 0.0, Polarization::Unpolarized).unwrap();
        let oracle = ((n - 1.0) * (n - 1.0) + k * k) / ((n + 1.0) * (n + 1.0) + k * k);
        assert!(
            (computed - oracle).abs() <= 1e-9,
            "{}: {computed} vs closed form {oracle}",
            material.name
        );
        let s = fresnel_reflectance(material, 0.0, Polarization::S).unwrap();
        let p = fresnel_reflectance(material, 0.0, Polarization::P).unwrap();
        assert!(
            (s - p).abs() <= 1e-12,
            "{}: s/p split at normal",
            material.name
        );
    }
    println!(
        "ACCEPTANCE criterion 4 PASS: normal-incidence reflectance matches \
         |(n-1)/(n+1)|^2 to 1e-9 and s = p to 1e-12 for Si and Al"
    );
}

#[test]
fn criterion_5_table_reconciliation() {
    let fiber = fiber();
    let coated = MirrorSpec::aluminum_coated();
    let measurements: Vec<PowerMeasurement> = COATED_SAMPLES
        .iter()
        .map(|&(p1_uw, p2_uw)| PowerMeasurement { p1_uw, p2_uw })
        .collect();
    let fit = fit_capture_factor(&measurements, &coated, fiber.wavelength_nm).unwrap();

    let mut worst = 0.0_f64;
    for &(p1, p2) in &COATED_SAMPLES {
        let predicted = power_budget(&fiber, &coated, fit.capture_factor, p1)
            .unwrap()
            .predicted_output_uw;
        let rel = (predicted - p2).abs() / p2;
        worst = worst.max(rel);
        assert!(rel <= 0.05, "P1 = {p1}: predicted {predicted} vs {p2}");
    }

    let bare = MirrorSpec::bare_silicon();
    let r_coated = power_budget(&fiber, &coated, fit.capture_factor, 1.0)
        .unwrap()
        .predicted_reflectivity;
    let r_bare = power_budget(&fiber, &bare, fit.capture_factor, 1.0)
        .unwrap()
        .predicted_reflectivity;
    let ratio = r_bare / r_coated;
    let measured = 0.31 / 0.70;
    let ratio_dev = (ratio - measured).abs() / measured;
    assert!(ratio_dev <= 0.15, "ratio {ratio} vs measured {measured}");

    println!(
        "ACCEPTANCE criterion 5 PASS: capture factor {:.4}, worst sample error \
         {:.2}%, bare/coated ratio {ratio:.4} vs {measured:.4} ({:.1}% dev)",
        fit.capture_factor,
        worst * 100.0,
        ratio_dev * 100.0
    );
}

#[test]
fn criterion_6_mirror_kinematics() {
    let mirror = MirrorSpec::aluminum_coated();
    let n = mirror.normal();
    let d = Vec2::new(1.0, 0.0);
    let reflected = reflect_direction(d, n);
    let elevation = reflected.y.asin().to_degrees();
    assert!(
        (elevation - 70.53).abs() <= 0.01,
        "elevation {elevation} vs 70.53 ± 0.01"
    );
    // Hand oracle: d - 2 (d·n) n with the components written out.
    let theta = CrystalAngle::si_100_111().radians();
    let oracle = Vec2::new(
        1.0 - 2.0 * theta.sin() * theta.sin(),
        2.0 * theta.sin() * theta.cos(),
    );
    assert!((reflected.x - oracle.x).abs() <= 1e-12);
    assert!((reflected.y - oracle.y).abs() <= 1e-12);

    let twice = reflect_direction(reflected, n);
    assert!((twice.x - d.x).abs() <= 1e-12 && (twice.y - d.y).abs() <= 1e-12);
    println!(
        "ACCEPTANCE criterion 6 PASS: elevation {elevation:.4} deg, \
         double reflection restores the direction to 1e-12"
    );
}

#[test]
fn criterion_7_scatter_loss() {
    let incidence = std::f64::consts::FRAC_PI_2 - CrystalAngle::si_100_111().radians();
    let loss = tis_scatter_loss(4.1, incidence, 632.0).unwrap();
    assert!(
        (loss * 100.0 - 0.44).abs() <= 0.02,
        "TIS {:.4}% vs 0.44 ± 0.02%",
        loss * 100.0
    );
    let smooth = tis_scatter_loss(0.0, incidence, 632.0).unwrap();
    assert_eq!(smooth, 0.0);
    println!(
        "ACCEPTANCE criterion 7 PASS: TIS(Ra 4.1 nm, 35.26 deg, 632 nm) = {:.4}%, \
         TIS(0) = 0 exactly",
        loss * 100.0
    );
}

#[test]
fn criterion_8_recipe_validation() {
    let model = EtchRateModel::default_koh_40wt();
    let options = ValidationOptions::default();

    let flow_report = validate_flow(&reference_flow(), &model);
    assert!(flow_report.passed(), "flow:\n{flow_report}");
    for bond in [BondRecipe::reference_48g(), BondRecipe::reference_80g()] {
        let report = validate_bond(&bond, &options);
        assert!(
            report.passed(),
            "bond {} g:\n{report}",
            bond.counterpoise_mass_g
        );
    }

    // Mutation suite: every corruption must trip at least one violation.
    let mut tripped = 0;
    type FlowCorruption = Box<dyn Fn(&mut Vec<vgroove::recipe::ProcessStep>)>;
    let flow_corruptions: Vec<FlowCorruption> = vec![
        Box::new(|s| {
            s[0] = s[0].clone().with_number("thickness_um", -1.0);
        }),
        Box::new(|s| {
            s[0].parameters.remove("temp_c");
        }),
        Box::new(|s| {
            s[5].parameters.remove("koh_wt_pct");
        }),
        Box::new(|s| {
            s[5] = s[5].clone().with_number("temp_c", 0.0);
        }),
        Box::new(|s| {
            s[5] = s[5].clone().with_number("time_min", -5.0);
        }),
        Box::new(|s| {
            s[5] = s[5].clone().with_number("target_depth_um", 200.0);
        }),
        Box::new(|s| s.swap(0, 1)),
        Box::new(|s| s.swap(6, 7)),
        Box::new(|s| {
            s[7].parameters.remove("thickness_nm");
        }),
    ];
    for corrupt in &flow_corruptions {
        let mut steps = reference_flow();
        corrupt(&mut steps);
        assert!(!validate_flow(&steps, &model).passed());
        tripped += 1;
    }
    type BondCorruption = Box<dyn Fn(&mut BondRecipe)>;
    let bond_corruptions: Vec<BondCorruption> = vec![
        Box::new(|b| b.voltage_v = 900.0),
        Box::new(|b| b.stage_temperature_c = 300.0),
        Box::new(|b| b.bond_time_min = -1.0),
        Box::new(|b| b.counterpoise_mass_g = 64.0),
        Box::new(|b| b.clean_sequence.clear()),
        Box::new(|b| {
            b.clean_sequence
                .retain(|s| s.text("agent") != Some("di_rinse"));
        }),
    ];
    for corrupt in &bond_corruptions {
        let mut bond = BondRecipe::reference_48g();
        corrupt(&mut bond);
        assert!(!validate_bond(&bond, &options).passed());
        tripped += 1;
    }
    assert!(tripped >= 10);
    println!(
        "ACCEPTANCE criterion 8 PASS: reference flow and both bond rows clean; \
         {tripped} single-field corruptions all caught"
    );
}

#[test]
fn criterion_9_reproduce_end_to_end() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let output = Command::new(bin())
        .args(["reproduce", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    let elapsed = started.elapsed();
    assert!(
        output.status.success(),
        "reproduce failed:\n{}",
        String::from_utf8_lossy(&output.stdout)
    );
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("all rows PASS"));
    let pass_rows = stdout.lines().filter(|l| l.ends_with("PASS")).count();
    assert!(pass_rows >= 20, "only {pass_rows} PASS rows");
    assert!(!stdout.lines().any(|l| l.ends_with("FAIL")));
    assert!(elapsed.as_secs_f64() < 60.0, "reproduce took {elapsed:?}");
    assert!(Path::new(&dir.path().join("reproduce.json")).exists());
    println!(
        "ACCEPTANCE criterion 9 PASS: reproduce ran {pass_rows} rows, all PASS, \
         runtime {elapsed:?}"
    );
}
