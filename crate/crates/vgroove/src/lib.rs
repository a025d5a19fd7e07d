//! Design and simulation toolkit for silicon V-groove fiber platforms.
//!
//! KOH anisotropic etching of (100) silicon produces self-aligning
//! V-grooves bounded by (111) planes at 54.74°, used both to seat a bare
//! optical fiber and, at the groove end, as a turning micro-mirror for
//! the fiber beam. This crate covers the four engineering questions such
//! a platform raises:
//!
//! - [`geometry`]: how deep a groove seats a given fiber, and where the
//!   fiber actually rests in an over- or under-etched cross-section.
//! - [`kinetics`]: Arrhenius etch-rate fitting and time/depth planning.
//! - [`etchsim`]: time-stepped 2-D etch-front simulation under a mask
//!   opening, converging to the self-limited V.
//! - [`optics`]: Fresnel reflectance of the bare or Al-coated mirror,
//!   roughness scatter, beam footprints, and the chained power budget.
//! - [`recipe`]: declarative process-flow validation and traveler
//!   rendering, including the anodic-bond schedule.
//!
//! Units are µm for lengths (nm for wavelengths and roughness), minutes
//! for durations, °C at API boundaries with kelvin inside the kinetics.
//! Everything is a pure function over immutable values; all types are
//! safe to share across threads.

// Validators use `!(x > 0.0)` instead of `x <= 0.0` so NaN inputs are
// rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod etchsim;
pub mod geometry;
pub mod kinetics;
pub mod optics;
pub mod recipe;
pub mod vec2;

pub use error::{Error, Result};
pub use vec2::Vec2;

// The guide's code blocks run as doc-tests, so the book cannot drift
// from the library. One module per chapter keeps failures traceable.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groove-geometry.md")]
    mod groove_geometry {}
    #[doc = include_str!("../../../book/src/etch-kinetics.md")]
    mod etch_kinetics {}
    #[doc = include_str!("../../../book/src/etch-simulation.md")]
    mod etch_simulation {}
    #[doc = include_str!("../../../book/src/mirror-optics.md")]
    mod mirror_optics {}
    #[doc = include_str!("../../../book/src/power-budget.md")]
    mod power_budget {}
    #[doc = include_str!("../../../book/src/process-recipes.md")]
    mod process_recipes {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
}
