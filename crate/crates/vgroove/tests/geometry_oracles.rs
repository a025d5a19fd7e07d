//! Geometry checked against an independent inscribed-circle oracle.
//!
//! The oracle never touches the closed-form seat-depth algebra: it finds
//! the circle of radius r tangent to both groove walls by bisecting the
//! center height against a point-to-line distance, then reports what the
//! library should have computed.

use vgroove::geometry::{
    design_groove, fiber_seating, opening_width, seat_depth, self_limit_depth, CrystalAngle,
    FiberSpec, GrooveDesign, Seating,
};

fn fiber(radius_um: f64) -> FiberSpec {
    FiberSpec {
        radius_um,
        ..FiberSpec::default_multimode()
    }
}

/// Distance from point (px, py) to the line through (ax, ay)-(bx, by).
fn point_line_distance(px: f64, py: f64, ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    let dx = bx - ax;
    let dy = by - ay;
    ((px - ax) * dy - (py - ay) * dx).abs() / (dx * dx + dy * dy).sqrt()
}

/// Inscribed-circle oracle: center height above the V apex at which a
/// circle of radius `r` is tangent to walls rising at `theta` from the
/// horizontal. Solved by bisection on the tangency residual.
fn inscribed_center_height(r: f64, theta: f64) -> f64 {
    // Wall through the apex (0,0) toward (cos theta, sin theta).
    let (sin_t, cos_t) = theta.sin_cos();
    let dist = |h: f64| point_line_distance(0.0, h, 0.0, 0.0, cos_t, sin_t);
    let (mut lo, mut hi) = (0.0_f64, 100.0 * r);
    assert!(dist(hi) > r, "bracket must contain the tangency");
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if dist(mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / 2.0
}

/// Oracle seat depth: apex-to-top distance of the tangent circle.
fn oracle_seat_depth(r: f64) -> f64 {
    inscribed_center_height(r, CrystalAngle::si_100_111().radians()) + r
}

#[test]
fn seat_depth_matches_inscribed_circle_oracle() {
    for r in [10.0, 62.5, 125.0] {
        let oracle = oracle_seat_depth(r);
        let computed = seat_depth(&fiber(r)).unwrap();
        assert!(
            (computed - oracle).abs() <= 1e-9 * oracle,
            "r = {r}: computed {computed} vs oracle {oracle}"
        );
    }
}

#[test]
fn seat_depth_for_the_reference_fiber() {
    let d = seat_depth(&fiber(62.5)).unwrap();
    // Frozen from the oracle: 62.5 (1 + sec 54.7356°).
    assert!((d - 170.753_175_473_054_85).abs() <= 1e-9 * 170.753);
    // The quoted fabrication target rounds to 172 um; ±2 um covers it.
    assert!((d - 172.0).abs() <= 2.0);
}

#[test]
fn opening_width_frozen_values() {
    // w = sqrt(2) d, evaluated by hand.
    let w = opening_width(170.753_175_473_054_85).unwrap();
    assert!((w - 241.481_456_572_267_12).abs() < 1e-9);
    // d = 172 gives w = 243.24; the 250 um mask used in practice carries
    // the remainder as margin.
    let w172 = opening_width(172.0).unwrap();
    assert!((w172 - 243.244_732_728_172_35).abs() < 1e-9);
}

#[test]
fn self_limit_frozen_values() {
    let d = self_limit_depth(250.0).unwrap();
    assert!((d - 176.776_695_296_636_86).abs() < 1e-9);
}

#[test]
fn design_groove_reconciles_to_250_with_margin() {
    let design = design_groove(&fiber(62.5), 8.5).unwrap();
    assert!((design.mask_opening_um - 250.0).abs() < 0.02);
    assert!((design.depth_um - 170.753_175_473_054_85).abs() < 1e-9);
    assert!((design.clearance_um - 45.753_175_473_054_84).abs() < 1e-9);

    let no_margin = design_groove(&fiber(62.5), 0.0).unwrap();
    assert!((no_margin.mask_opening_um - 241.481_456_572_267_12).abs() < 1e-9);
}

#[test]
fn seated_fiber_is_tangent_to_both_walls() {
    // Wall-distance residual below 1e-9 r, checked with the oracle's own
    // point-to-line distance.
    for (opening, depth) in [
        (241.481_456_572_267_12, 170.753_175_473_054_85),
        (268.700_576_850_888_2, 190.0),
        (300.0, 212.132_034_355_964_26),
    ] {
        let groove = GrooveDesign::from_cross_section(opening, depth).unwrap();
        let seating = fiber_seating(&groove, &fiber(62.5)).unwrap();
        let Seating::Seated(s) = seating else {
            panic!("expected seated state in a {opening} um groove");
        };
        // Center sits on the axis at contact_height above the virtual apex.
        let apex_y = -groove.virtual_apex_depth();
        let center_y = apex_y + s.contact_height_um;
        let half_w = opening / 2.0;
        // Walls descend from (±w/2, 0) toward the apex.
        let d_left = point_line_distance(0.0, center_y, -half_w, 0.0, 0.0, apex_y);
        let d_right = point_line_distance(0.0, center_y, half_w, 0.0, 0.0, apex_y);
        assert!(
            (d_left - 62.5).abs() < 1e-9 * 62.5,
            "left residual {d_left}"
        );
        assert!(
            (d_right - 62.5).abs() < 1e-9 * 62.5,
            "right residual {d_right}"
        );
        // Contact points themselves lie at radius r from the center.
        for c in s.contacts {
            let dx = c.x - 0.0;
            let dy = c.y - center_y;
            let dist = (dx * dx + dy * dy).sqrt();
            assert!((dist - 62.5).abs() < 1e-9 * 62.5);
        }
    }
}

#[test]
fn over_etched_groove_recesses_the_fiber() {
    // A full V etched to 190 um (opening grown accordingly): the oracle
    // puts the center at apex + r sec(theta), so the fiber top sits
    // 19.247 um below the surface.
    let opening = 2.0_f64.sqrt() * 190.0;
    let groove = GrooveDesign::from_cross_section(opening, 190.0).unwrap();
    let seating = fiber_seating(&groove, &fiber(62.5)).unwrap();
    let Seating::Seated(s) = seating else {
        panic!("expected seated state");
    };
    let oracle_protrusion = oracle_seat_depth(62.5) - 190.0;
    assert!((s.protrusion_um - oracle_protrusion).abs() < 1e-9);
    assert!((s.protrusion_um - (-19.246_824_526_945_147)).abs() < 1e-9);
    assert!(s.protrusion_um < 0.0);
}

#[test]
fn shallow_groove_rides_on_rim() {
    // Tangency oracle: wall contact sits r tan(theta) sin(theta) = 72.17 um
    // above the apex, so any full V shallower than that puts the contact
    // above the mask plane and the fiber rides the rim corners.
    let depth = 60.0;
    let opening = 2.0_f64.sqrt() * depth;
    let groove = GrooveDesign::from_cross_section(opening, depth).unwrap();
    let seating = fiber_seating(&groove, &fiber(62.5)).unwrap();
    let Seating::RidesOnRim(rim) = seating else {
        panic!("expected rim state for a 60 um groove, got {seating:?}");
    };
    // Center height over the corners: sqrt(r^2 - (w/2)^2).
    let expected = (62.5_f64.powi(2) - (opening / 2.0).powi(2)).sqrt();
    assert!((rim.center_height_um - expected).abs() < 1e-9);
    assert!((rim.center_height_um - 45.893_899_376_714_55).abs() < 1e-9);
}

#[test]
fn hundred_micron_groove_seats_with_protrusion() {
    // The tangency oracle puts the contact 27.83 um below the mask plane
    // in a 100 um-deep V (opening 141.42 um), so the fiber does seat on
    // the walls, protruding 70.75 um above the surface.
    let depth = 100.0;
    let opening = 2.0_f64.sqrt() * depth;
    let groove = GrooveDesign::from_cross_section(opening, depth).unwrap();
    let seating = fiber_seating(&groove, &fiber(62.5)).unwrap();
    let Seating::Seated(s) = seating else {
        panic!("tangency oracle says seated; got {seating:?}");
    };
    let theta = CrystalAngle::si_100_111().radians();
    let oracle_contact_depth = depth - 62.5 * theta.tan() * theta.sin();
    assert!(oracle_contact_depth > 0.0, "contact below the mask plane");
    assert!((s.contacts[0].y - (-oracle_contact_depth)).abs() < 1e-9);
    let oracle_protrusion = oracle_seat_depth(62.5) - depth;
    assert!((s.protrusion_um - oracle_protrusion).abs() < 1e-9);
    assert!((s.protrusion_um - 70.753_175_473_054_85).abs() < 1e-9);
}
