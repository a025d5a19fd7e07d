//! Property tests for the algebraic invariants.

use proptest::prelude::*;

use vgroove::geometry::{
    fiber_seating, opening_width, seat_depth, self_limit_depth, FiberSpec, GrooveDesign, Seating,
};
use vgroove::kinetics::{fit_arrhenius, EtchRateModel, RatePoint};
use vgroove::optics::{
    fresnel_reflectance, reflect_direction, tis_scatter_loss, OpticalMaterial, Polarization,
};
use vgroove::vec2::Vec2;

fn fiber(radius_um: f64) -> FiberSpec {
    FiberSpec {
        radius_um,
        ..FiberSpec::default_multimode()
    }
}

proptest! {
    #[test]
    fn seat_depth_is_linear_in_radius(r in 1e-3..1e3f64, k in 1e-3..1e3f64) {
        let d1 = seat_depth(&fiber(r)).unwrap();
        let dk = seat_depth(&fiber(k * r)).unwrap();
        prop_assert!((dk - k * d1).abs() <= 1e-12 * dk.abs().max(1e-300));
    }

    #[test]
    fn opening_width_is_strictly_increasing(d in 1e-3..1e4f64, delta in 1e-6..1e3f64) {
        prop_assert!(opening_width(d + delta).unwrap() > opening_width(d).unwrap());
    }

    #[test]
    fn self_limit_inverts_opening_width(d in 1e-3..1e4f64) {
        let rt = self_limit_depth(opening_width(d).unwrap()).unwrap();
        prop_assert!((rt - d).abs() <= 1e-12 * d);
    }

    #[test]
    fn every_wall_seating_is_tangent(depth in 80.0..500.0f64, r in 10.0..70.0f64) {
        // Full V of the given depth; fiber either seats or rides the rim,
        // and when seated the wall-distance residual stays under 1e-9 r.
        let opening = 2.0_f64.sqrt() * depth;
        let groove = GrooveDesign::from_cross_section(opening, depth).unwrap();
        match fiber_seating(&groove, &fiber(r)).unwrap() {
            Seating::Seated(s) => {
                let apex_y = -groove.virtual_apex_depth();
                let center_y = apex_y + s.contact_height_um;
                // Distance to the right wall line through (w/2, 0) and the apex.
                let (ax, ay) = (opening / 2.0, 0.0);
                let (bx, by) = (0.0, apex_y);
                let (dx, dy) = (bx - ax, by - ay);
                let dist = ((0.0 - ax) * dy - (center_y - ay) * dx).abs()
                    / (dx * dx + dy * dy).sqrt();
                prop_assert!((dist - r).abs() < 1e-9 * r);
            }
            Seating::RidesOnRim(rim) => {
                // Rim contact only happens when the tangency would land
                // above the surface.
                prop_assert!(rim.center_height_um >= 0.0);
            }
            Seating::RestsOnFloor(_) => {
                prop_assert!(false, "full V cannot present a floor");
            }
        }
    }

    #[test]
    fn arrhenius_fit_is_scale_consistent(c in 1e-3..1e3f64) {
        let base = [RatePoint::new(40.0, 0.25), RatePoint::new(90.0, 2.0)];
        let scaled: Vec<RatePoint> = base
            .iter()
            .map(|p| RatePoint::new(p.temp_c, c * p.rate_um_min))
            .collect();
        let m0 = fit_arrhenius(&base).unwrap();
        let m1 = fit_arrhenius(&scaled).unwrap();
        prop_assert!((m1.activation_k - m0.activation_k).abs() <= 1e-9 * m0.activation_k);
        prop_assert!((m1.prefactor_um_min - c * m0.prefactor_um_min).abs()
            <= 1e-9 * (c * m0.prefactor_um_min));
    }

    #[test]
    fn plan_and_depth_after_are_inverse(depth in 0.1..176.0f64, temp in 35.0..95.0f64) {
        let model = EtchRateModel::default_koh_40wt();
        let minutes = model.plan_etch(depth, temp, 250.0).unwrap();
        let back = model.depth_after(temp, minutes, 250.0).unwrap();
        prop_assert!((back - depth).abs() <= 1e-3 * depth);
    }

    #[test]
    fn rate_is_strictly_increasing(t in 30.0..99.0f64, dt in 0.01..1.0f64) {
        let model = EtchRateModel::default_koh_40wt();
        let lo = model.rate_at(t).unwrap().rate_um_min;
        let hi = model.rate_at(t + dt).unwrap().rate_um_min;
        prop_assert!(hi > lo);
        prop_assert!(lo.is_finite() && lo > 0.0);
    }

    #[test]
    fn fresnel_stays_in_unit_interval(
        n in 1.0..8.0f64,
        k in 0.0..10.0f64,
        deg in 0.0..89.9f64,
    ) {
        let material = OpticalMaterial {
            name: "probe".into(),
            refractive_index_real: n,
            refractive_index_imag: k,
            at_wavelength_nm: 633.0,
        };
        for pol in [Polarization::S, Polarization::P, Polarization::Unpolarized] {
            let r = fresnel_reflectance(&material, deg.to_radians(), pol).unwrap();
            prop_assert!((0.0..=1.0).contains(&r), "R = {r}");
        }
    }

    #[test]
    fn reflection_preserves_norm_and_angle(dx in -1.0..1.0f64, dy in -1.0..0.0f64) {
        prop_assume!(dx.abs() + dy.abs() > 1e-3);
        let d = Vec2::new(dx, dy).normalized();
        let theta = 2.0_f64.sqrt().atan();
        let n = Vec2::new(-theta.sin(), theta.cos());
        let r = reflect_direction(d, n);
        prop_assert!((r.norm() - 1.0).abs() < 1e-12);
        prop_assert!((d.dot(n).abs() - r.dot(n).abs()).abs() < 1e-12);
        let twice = reflect_direction(r, n);
        prop_assert!((twice.x - d.x).abs() < 1e-12 && (twice.y - d.y).abs() < 1e-12);
    }

    #[test]
    fn tis_is_monotone_in_roughness(ra in 0.0..50.0f64, extra in 0.1..20.0f64) {
        let i = 0.6155;
        let lo = tis_scatter_loss(ra, i, 632.0).unwrap();
        let hi = tis_scatter_loss(ra + extra, i, 632.0).unwrap();
        prop_assert!(hi > lo || (ra == 0.0 && lo == 0.0 && hi > 0.0));
        prop_assert!((0.0..1.0).contains(&lo));
    }
}
