//! Adaptive-threshold CFAR detection of Pareto-distributed targets in
//! Pareto-distributed sea clutter.
//!
//! The cell under test (CUT) holds one intensity observation `y` and the
//! reference window holds `n` clutter observations `x_1..x_n`, all modeled
//! as two-parameter Pareto variates. Target presence is decided by a
//! two-sample test on the tail index: under H0 the CUT shape equals the
//! clutter shape `alpha`; under H1 it is heavier (`rho < alpha`). Three
//! detectors are provided:
//!
//! * **clairvoyant** — Neyman-Pearson test with fully known clutter
//!   parameters; the performance upper bound,
//! * **case-a** — GLRT when the shape `alpha` is unknown and the scale `h`
//!   is known,
//! * **case-b** — GLRT when both `alpha` and `h` are unknown.
//!
//! The adaptive thresholds of the two GLRT detectors depend only on the
//! window size and the design false-alarm probability, so both tests hold
//! a constant false-alarm rate over the unknown clutter parameters. The
//! [`montecarlo`] module estimates empirical error rates at desk scale,
//! [`profile`] runs the detectors over synthetic sliding-window range
//! profiles, and [`validation`] re-derives the distributional identities
//! the closed forms rest on.
//!
//! Closed-form kernels are generic over the scalar type (any
//! [`Real`]); the simulation lane is pinned to `f64`, and the aliases at
//! the crate root name that concrete lane.
//!
//! ```
//! use pareto_cfar::{DetectionInput, DetectorSpec64};
//!
//! // eight clutter cells around a CUT spiking well above them
//! let window = [0.9, 1.4, 0.8, 2.1, 1.0, 0.75, 1.6, 0.95];
//! let spec = DetectorSpec64::case_b(1e-3, 8)?;
//! let decision = spec.detect(&DetectionInput::new(200.0, &window))?;
//! assert!(decision.target_present);
//! # Ok::<(), pareto_cfar::Error>(())
//! ```

// `!(x > 0)` style guards double as NaN rejection; reading them as
// `x <= 0` would silently admit NaN parameters.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detect;
pub mod error;
pub mod montecarlo;
pub mod pareto;
pub mod profile;
pub mod stats;
pub mod validation;

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Scalar type the closed-form kernels are written against: `f32`, `f64`,
/// or anything else float-like with primitive conversions.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

pub use detect::{
    case_a_pd, case_a_statistic, case_a_threshold, case_b_pd, case_b_statistic, case_b_threshold,
    clairvoyant_pd, clairvoyant_threshold, detect, exact_regime, mle_case_a, mle_case_b,
    raw_likelihood_ratio_case_a, simplified_likelihood_ratio, Decision, DetectionInput,
    DetectorClass, DetectorKind, DetectorSpec, MleResult,
};
pub use error::{Error, Result};
pub use montecarlo::{
    cfar_sweep, compare_to_clairvoyant, estimate_pd, estimate_pfa, roc_curve, ComparePoint,
    CompareResult, RocCurve, RocPoint, RocSource, SweepPoint, SweepResult, TrialEstimate,
};
pub use pareto::{g_density, log_reduce, DerivedLaw, ParetoParams};
pub use profile::{
    generate_profile, scan_profile, CellDecision, ProfileConfig, ProfileScan, RangeProfile,
    TargetSpec,
};
pub use validation::{negative_control, run_identity_suite, CheckResult, ValidationReport};

/// `f64` lane used by the simulation and CLI layers.
pub type ParetoParams64 = pareto::ParetoParams<f64>;
/// `f64` detector configuration.
pub type DetectorSpec64 = detect::DetectorSpec<f64>;
/// `f64` detection outcome.
pub type Decision64 = detect::Decision<f64>;
