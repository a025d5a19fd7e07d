//! Crate-wide error type.

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the design and simulation operations.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An input violated a mathematical precondition (non-positive length,
    /// angle out of range, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A model fit could not be performed on the given data.
    #[error("fit error: {0}")]
    Fit(String),

    /// A simulation or component configuration is unusable as given.
    #[error("configuration error: {0}")]
    Config(String),

    /// An etch plan asked for a depth the mask opening can never reach.
    #[error(
        "unreachable depth: target {target_um:.3} um exceeds the self-limit \
         {limit_um:.3} um of a {mask_opening_um:.3} um mask opening"
    )]
    UnreachableDepth {
        target_um: f64,
        limit_um: f64,
        mask_opening_um: f64,
    },

    /// Measured throughput exceeds what the physical factors allow; the
    /// implied capture factor is reported so the caller can inspect the gap.
    #[error(
        "model deficit: measurements imply capture factor {implied:.4} > 1, \
         above the physical bound"
    )]
    ModelDeficit { implied: f64 },

    /// A ray never meets the mirror plane.
    #[error("no intersection: {0}")]
    NoIntersection(String),

    /// A sidewall facet is too short to fit a line through.
    #[error("insufficient facet: {0}")]
    InsufficientFacet(String),

    /// Profile lookup at a timestamp that was never recorded.
    #[error("unknown timestamp {t_min} min; profile holds {count} snapshots")]
    UnknownTimestamp { t_min: f64, count: usize },

    /// Rendering was refused because validation reported violations.
    #[error(
        "validation failed with {violation_count} violation(s); pass force=true to render anyway"
    )]
    ValidationFailed { violation_count: usize },
}
