//! Crate-wide error type.
//!
//! Error payloads are stored as `f64` regardless of the scalar type the
//! failing kernel ran at, so the error enum stays non-generic.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape parameter must be positive, got {0}")]
    InvalidShape(f64),

    #[error("scale parameter must be positive, got {0}")]
    InvalidScale(f64),

    #[error(
        "log reduction needs value >= reference > 0, got value {value}, reference {reference}"
    )]
    LogDomain { value: f64, reference: f64 },

    #[error("false-alarm probability {pfa} outside valid range {range}")]
    InvalidPfa { pfa: f64, range: String },

    #[error("window must hold at least {needed} observations, got {got}")]
    WindowTooSmall { needed: usize, got: usize },

    #[error("window length {got} does not match detector window size {expected}")]
    WindowMismatch { expected: usize, got: usize },

    #[error("target shape {rho} must not exceed clutter shape {alpha}")]
    RhoExceedsAlpha { rho: f64, alpha: f64 },

    #[error("observation {value} below known scale {scale}")]
    ObservationBelowScale { value: f64, scale: f64 },

    #[error("observations must be positive, got {0}")]
    NonpositiveObservation(f64),

    #[error("observations must be finite, got {0}")]
    NonFiniteObservation(f64),

    #[error("degenerate sample: all observations sit at the support edge")]
    DegenerateSample,

    #[error("detector/input mismatch: {0}")]
    SpecMismatch(String),

    #[error("target scale {target} must equal clutter scale {clutter}")]
    ScaleMismatch { clutter: f64, target: f64 },

    #[error("pfa grid point {pfa} below resolution {min} of {trials} trials (fewer than ~100 expected hits)")]
    PfaBelowResolution { pfa: f64, min: f64, trials: u64 },

    #[error("parameter grid must not be empty")]
    EmptyGrid,

    #[error("pfa grid must be strictly increasing")]
    GridNotIncreasing,

    #[error("need at least one trial")]
    NoTrials,

    #[error("profile of {got} cells too short for window half-width {half_window} plus {guard} guard cells per side")]
    ProfileTooShort {
        got: usize,
        half_window: usize,
        guard: usize,
    },

    #[error("target cell {index} outside profile of {cells} cells")]
    TargetOutOfRange { index: usize, cells: usize },

    #[error("duplicate target cell {0}")]
    DuplicateTarget(usize),
}

impl Error {
    pub(crate) fn invalid_pfa(pfa: f64, range: &str) -> Self {
        Error::InvalidPfa {
            pfa,
            range: range.to_owned(),
        }
    }
}
