//! Error taxonomy shared by all modules.

use thiserror::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Which side of a coverage interval a failed bracket fell on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketSide {
    Below,
    Above,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("superluminal velocity: speed {speed} is not below 1")]
    SuperluminalVelocity { speed: f64 },

    #[error("singular separation: {0}")]
    SingularSeparation(String),

    #[error("time {t} outside covered interval [{lo}, {hi}]{}", side_note(.side))]
    OutOfDomain {
        t: f64,
        lo: f64,
        hi: f64,
        side: Option<BracketSide>,
    },

    #[error("fit failure: node residual {residual:.3e} exceeds threshold {threshold:.3e}")]
    FitFailure { residual: f64, threshold: f64 },

    #[error("monotonicity violation: {0}")]
    MonotonicityViolation(String),

    #[error("interval mismatch at join: expected {expected}, got {got} (gap {gap:.3e})")]
    IntervalMismatch { expected: f64, got: f64, gap: f64 },

    #[error(
        "smoothness violation at t = {at}: order-{order} mismatch {mismatch:.3e} exceeds {tol:.3e}"
    )]
    SmoothnessViolation {
        at: f64,
        order: usize,
        mismatch: f64,
        tol: f64,
    },

    #[error("invalid worldline: {0}")]
    InvalidWorldline(String),

    #[error("invalid anchor: {0} (residual {residual:.3e})")]
    InvalidAnchor { residual: f64, message: String },

    #[error("speed guard breached: speed {speed} exceeds cap {cap}")]
    GuardSpeed { speed: f64, cap: f64 },

    #[error("separation guard breached: separation {separation:.3e} below minimum {minimum:.3e}")]
    GuardSeparation { separation: f64, minimum: f64 },

    #[error("construction inconsistency: {0}")]
    ConstructionInconsistency(String),

    #[error("initial data failed validation ({failed} condition(s)); first: {first}")]
    ValidationFailure { failed: usize, first: String },

    #[error("quadrature did not converge: error estimate {estimate:.3e} above tolerance")]
    QuadratureFailure { estimate: f64 },

    #[error("no circular-orbit solution in the admissible frequency window")]
    NoSolutionInWindow,

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

fn side_note(side: &Option<BracketSide>) -> String {
    match side {
        Some(BracketSide::Below) => " (bracket failed below coverage)".to_string(),
        Some(BracketSide::Above) => " (bracket failed above coverage)".to_string(),
        None => String::new(),
    }
}
