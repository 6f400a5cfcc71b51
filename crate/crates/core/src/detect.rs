//! The three detection procedures: clairvoyant Neyman-Pearson bound,
//! GLRT with known scale (case a), and GLRT with unknown shape and scale
//! (case b).
//!
//! All three decide H1 when a scalar statistic exceeds a threshold fixed
//! by the design false-alarm probability:
//!
//! * clairvoyant — statistic is the CUT intensity itself,
//!   `gamma_th = h * pfa^(-1/alpha)`;
//! * case a — `u = n * L(y) / L(x)` with `L(y) = ln(y/h)`,
//!   `L(x) = sum ln(x_i/h)`, and `gamma_1 = n (pfa^(-1/n) - 1)`;
//! * case b — `ln(y/x_(1)) / [(1/n) sum ln(x_i/x_(1))]` with
//!   `gamma = n ([(n+1) pfa / n]^(1/(1-n)) - 1)`, valid for
//!   `pfa < n/(n+1)`.
//!
//! The case-a/case-b thresholds depend only on `(pfa, n)`, which is the
//! CFAR property. Closed-form detection probabilities are exposed next to
//! the thresholds so simulation results can be overlaid on theory.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pareto::{log_reduce, ParetoParams};
use crate::Real;

/// One detection problem: the CUT observation and its reference window.
#[derive(Debug, Clone, Copy)]
pub struct DetectionInput<'a, F> {
    pub cut: F,
    pub window: &'a [F],
}

impl<'a, F: Real> DetectionInput<'a, F> {
    pub fn new(cut: F, window: &'a [F]) -> Self {
        Self { cut, window }
    }
}

/// Detector family plus whatever clutter knowledge it assumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectorKind<F> {
    /// Fully known clutter law; the performance upper bound.
    Clairvoyant { clutter: ParetoParams<F> },
    /// Known scale `h`, unknown shape.
    CaseA { scale: F },
    /// Both parameters unknown.
    CaseB,
}

impl<F> DetectorKind<F> {
    pub fn class(&self) -> DetectorClass {
        match self {
            DetectorKind::Clairvoyant { .. } => DetectorClass::Clairvoyant,
            DetectorKind::CaseA { .. } => DetectorClass::CaseA,
            DetectorKind::CaseB => DetectorClass::CaseB,
        }
    }
}

/// Parameter-free label for the detector family, for reports and files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectorClass {
    Clairvoyant,
    CaseA,
    CaseB,
}

impl std::fmt::Display for DetectorClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DetectorClass::Clairvoyant => "clairvoyant",
            DetectorClass::CaseA => "case-a",
            DetectorClass::CaseB => "case-b",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for DetectorClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clairvoyant" => Ok(DetectorClass::Clairvoyant),
            "case-a" => Ok(DetectorClass::CaseA),
            "case-b" => Ok(DetectorClass::CaseB),
            other => Err(Error::SpecMismatch(format!(
                "unknown detector kind `{other}` (expected clairvoyant, case-a or case-b)"
            ))),
        }
    }
}

/// A configured detector: kind, design pfa, window size, and the
/// threshold they pin down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSpec<F> {
    kind: DetectorKind<F>,
    design_pfa: F,
    window_size: usize,
    threshold: F,
}

impl<F: Real> DetectorSpec<F> {
    /// Validate the configuration and precompute the threshold.
    pub fn new(kind: DetectorKind<F>, design_pfa: F, window_size: usize) -> Result<Self> {
        let threshold = match kind {
            DetectorKind::Clairvoyant { clutter } => clairvoyant_threshold(design_pfa, &clutter)?,
            DetectorKind::CaseA { scale } => {
                if !(scale > F::zero()) || !scale.is_finite() {
                    return Err(Error::InvalidScale(to_f64(scale)));
                }
                if window_size < 1 {
                    return Err(Error::WindowTooSmall {
                        needed: 1,
                        got: window_size,
                    });
                }
                case_a_threshold(design_pfa, window_size)?
            }
            DetectorKind::CaseB => case_b_threshold(design_pfa, window_size)?,
        };
        Ok(Self {
            kind,
            design_pfa,
            window_size,
            threshold,
        })
    }

    pub fn clairvoyant(
        clutter: ParetoParams<F>,
        design_pfa: F,
        window_size: usize,
    ) -> Result<Self> {
        Self::new(
            DetectorKind::Clairvoyant { clutter },
            design_pfa,
            window_size,
        )
    }

    pub fn case_a(scale: F, design_pfa: F, window_size: usize) -> Result<Self> {
        Self::new(DetectorKind::CaseA { scale }, design_pfa, window_size)
    }

    pub fn case_b(design_pfa: F, window_size: usize) -> Result<Self> {
        Self::new(DetectorKind::CaseB, design_pfa, window_size)
    }

    /// Same detector at a different design pfa.
    pub fn with_design_pfa(&self, design_pfa: F) -> Result<Self> {
        Self::new(self.kind, design_pfa, self.window_size)
    }

    pub fn kind(&self) -> &DetectorKind<F> {
        &self.kind
    }

    pub fn class(&self) -> DetectorClass {
        self.kind.class()
    }

    pub fn design_pfa(&self) -> F {
        self.design_pfa
    }

    pub fn window_size(&self) -> usize {
        self.window_size
    }

    /// Detection threshold implied by the design pfa.
    pub fn threshold(&self) -> F {
        self.threshold
    }

    /// Test statistic for one input. The clairvoyant statistic is the CUT
    /// intensity itself.
    pub fn statistic(&self, input: &DetectionInput<'_, F>) -> Result<F> {
        if input.window.len() != self.window_size {
            return Err(Error::WindowMismatch {
                expected: self.window_size,
                got: input.window.len(),
            });
        }
        match self.kind {
            DetectorKind::Clairvoyant { .. } => Ok(input.cut),
            DetectorKind::CaseA { scale } => case_a_statistic(input.cut, input.window, scale),
            DetectorKind::CaseB => case_b_statistic(input.cut, input.window),
        }
    }

    /// Run the full decision rule on one input.
    pub fn detect(&self, input: &DetectionInput<'_, F>) -> Result<Decision<F>> {
        let statistic = self.statistic(input)?;
        Ok(Decision::compare(statistic, self.threshold))
    }
}

/// Outcome of one detection: the statistic, the threshold it was held
/// against, and the comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decision<F> {
    pub target_present: bool,
    pub statistic: F,
    pub threshold: F,
}

impl<F: Real> Decision<F> {
    fn compare(statistic: F, threshold: F) -> Self {
        Decision {
            target_present: statistic > threshold,
            statistic,
            threshold,
        }
    }
}

/// Dispatch to the configured detector; identical to
/// [`DetectorSpec::detect`].
pub fn detect<F: Real>(
    spec: &DetectorSpec<F>,
    input: &DetectionInput<'_, F>,
) -> Result<Decision<F>> {
    spec.detect(input)
}

/// Restricted/unrestricted maximum-likelihood estimates of the two tail
/// indices. `boundary` is set when the constrained optimum sits at
/// `rho = alpha`, in which case both estimates collapse to the pooled
/// value `(n+1) / (L(y) + L(x))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleResult<F> {
    pub alpha_hat: F,
    pub rho_hat: F,
    pub h_hat: Option<F>,
    pub boundary: bool,
}

fn to_f64<F: Real>(x: F) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn check_window_at_scale<F: Real>(cut: F, window: &[F], scale: F) -> Result<()> {
    if !(scale > F::zero()) || !scale.is_finite() {
        return Err(Error::InvalidScale(to_f64(scale)));
    }
    for &v in window.iter().chain(std::iter::once(&cut)) {
        if !v.is_finite() {
            return Err(Error::NonFiniteObservation(to_f64(v)));
        }
        if v < scale {
            return Err(Error::ObservationBelowScale {
                value: to_f64(v),
                scale: to_f64(scale),
            });
        }
    }
    Ok(())
}

/// Case-a GLRT statistic `u = n * L(y) / L(x)` with `L(y) = ln(y/h)` and
/// `L(x) = sum_i ln(x_i/h)`.
///
/// `L(y) = 0` yields 0 (decide H0); `L(x) = 0` with `L(y) > 0` yields the
/// `+inf` sentinel, which outranks every finite threshold.
pub fn case_a_statistic<F: Real>(cut: F, window: &[F], scale: F) -> Result<F> {
    if window.is_empty() {
        return Err(Error::WindowTooSmall { needed: 1, got: 0 });
    }
    check_window_at_scale(cut, window, scale)?;
    let ly = log_reduce(cut, scale)?;
    let mut lx = F::zero();
    for &x in window {
        lx = lx + log_reduce(x, scale)?;
    }
    if ly == F::zero() {
        return Ok(F::zero());
    }
    if lx == F::zero() {
        return Ok(F::infinity());
    }
    let n = F::from_usize(window.len()).expect("window count fits the scalar type");
    Ok(n * ly / lx)
}

/// Case-a threshold `gamma_1 = n (pfa^(-1/n) - 1)`, independent of the
/// unknown clutter shape.
pub fn case_a_threshold<F: Real>(pfa: F, n: usize) -> Result<F> {
    if n < 1 {
        return Err(Error::WindowTooSmall { needed: 1, got: n });
    }
    if !(pfa > F::zero() && pfa < F::one()) {
        return Err(Error::invalid_pfa(to_f64(pfa), "(0, 1)"));
    }
    let nf = F::from_usize(n).expect("window count fits the scalar type");
    Ok(nf * (pfa.powf(-F::one() / nf) - F::one()))
}

/// Case-a detection probability `(1 + rho*gamma_1/(alpha*n))^(-n)`.
pub fn case_a_pd<F: Real>(pfa: F, n: usize, alpha: F, rho: F) -> Result<F> {
    check_shapes(alpha, rho)?;
    let gamma1 = case_a_threshold(pfa, n)?;
    let nf = F::from_usize(n).expect("window count fits the scalar type");
    Ok((F::one() + rho * gamma1 / (alpha * nf)).powf(-nf))
}

/// Case-b GLRT statistic `ln(y/x_(1)) / [(1/n) sum_i ln(x_i/x_(1))]`.
///
/// `y <= x_(1)` yields 0: the likelihood ratio is 1 there and H0 is
/// accepted outright. An all-equal window with `y > x_(1)` yields the
/// `+inf` sentinel.
pub fn case_b_statistic<F: Real>(cut: F, window: &[F]) -> Result<F> {
    if window.len() < 2 {
        return Err(Error::WindowTooSmall {
            needed: 2,
            got: window.len(),
        });
    }
    for &x in window.iter().chain(std::iter::once(&cut)) {
        if !x.is_finite() {
            return Err(Error::NonFiniteObservation(to_f64(x)));
        }
        if !(x > F::zero()) {
            return Err(Error::NonpositiveObservation(to_f64(x)));
        }
    }
    let window_min = window.iter().copied().fold(F::infinity(), F::min);
    if cut <= window_min {
        return Ok(F::zero());
    }
    let numer = log_reduce(cut, window_min)?;
    let mut denom = F::zero();
    for &x in window {
        denom = denom + log_reduce(x, window_min)?;
    }
    let nf = F::from_usize(window.len()).expect("window count fits the scalar type");
    denom = denom / nf;
    if denom == F::zero() {
        return Ok(F::infinity());
    }
    Ok(numer / denom)
}

/// Case-b threshold `gamma = n ([(n+1) pfa / n]^(1/(1-n)) - 1)`,
/// independent of both unknown clutter parameters. Requires
/// `pfa < n/(n+1)`; beyond that the closed form has no positive root.
pub fn case_b_threshold<F: Real>(pfa: F, n: usize) -> Result<F> {
    if n < 2 {
        return Err(Error::WindowTooSmall { needed: 2, got: n });
    }
    let nf = F::from_usize(n).expect("window count fits the scalar type");
    let max_pfa = nf / (nf + F::one());
    if !(pfa > F::zero() && pfa < max_pfa) {
        return Err(Error::invalid_pfa(to_f64(pfa), "(0, n/(n+1))"));
    }
    let base = (nf + F::one()) * pfa / nf;
    Ok(nf * (base.powf(F::one() / (F::one() - nf)) - F::one()))
}

/// Case-b detection probability
/// `(n*alpha/(rho + n*alpha)) * (1 + rho*gamma/(n*alpha))^(-(n-1))`.
pub fn case_b_pd<F: Real>(pfa: F, n: usize, alpha: F, rho: F) -> Result<F> {
    check_shapes(alpha, rho)?;
    let gamma = case_b_threshold(pfa, n)?;
    let nf = F::from_usize(n).expect("window count fits the scalar type");
    let na = nf * alpha;
    Ok(na / (rho + na) * (F::one() + rho * gamma / na).powf(-(nf - F::one())))
}

/// Clairvoyant threshold `gamma_th = h * pfa^(-1/alpha)`; the CUT itself
/// is the statistic. `pfa = 1` puts the threshold at the support edge.
pub fn clairvoyant_threshold<F: Real>(pfa: F, clutter: &ParetoParams<F>) -> Result<F> {
    if !(pfa > F::zero() && pfa <= F::one()) {
        return Err(Error::invalid_pfa(to_f64(pfa), "(0, 1]"));
    }
    Ok(clutter.scale() * pfa.powf(-F::one() / clutter.shape()))
}

/// Clairvoyant detection probability `pfa^(rho/alpha)`.
pub fn clairvoyant_pd<F: Real>(pfa: F, alpha: F, rho: F) -> Result<F> {
    check_shapes(alpha, rho)?;
    if !(pfa > F::zero() && pfa <= F::one()) {
        return Err(Error::invalid_pfa(to_f64(pfa), "(0, 1]"));
    }
    Ok(pfa.powf(rho / alpha))
}

fn check_shapes<F: Real>(alpha: F, rho: F) -> Result<()> {
    if !(alpha > F::zero()) {
        return Err(Error::InvalidShape(to_f64(alpha)));
    }
    if !(rho > F::zero()) {
        return Err(Error::InvalidShape(to_f64(rho)));
    }
    if rho > alpha {
        return Err(Error::RhoExceedsAlpha {
            rho: to_f64(rho),
            alpha: to_f64(alpha),
        });
    }
    Ok(())
}

/// Whether `(pfa, n)` sits in the regime where the adaptive threshold
/// exceeds 1 and the monotone likelihood-ratio inversion behind the
/// threshold formulas is exact. Holds for both case a and case b exactly
/// when `pfa < (1 + 1/n)^(-n)`; every practical design pfa is well inside.
pub fn exact_regime<F: Real>(pfa: F, n: usize) -> bool {
    let nf = F::from_usize(n).expect("window count fits the scalar type");
    pfa < (F::one() + F::one() / nf).powf(-nf)
}

/// Case-a maximum-likelihood estimates under the constraint `rho <= alpha`.
///
/// Interior solution `alpha_hat = n/L(x)`, `rho_hat = 1/L(y)` when
/// `1/L(y) < n/L(x)`; otherwise the optimum sits on the boundary and both
/// collapse to `(n+1)/(L(y) + L(x))`.
pub fn mle_case_a<F: Real>(cut: F, window: &[F], scale: F) -> Result<MleResult<F>> {
    if window.is_empty() {
        return Err(Error::WindowTooSmall { needed: 1, got: 0 });
    }
    check_window_at_scale(cut, window, scale)?;
    let ly = log_reduce(cut, scale)?;
    let mut lx = F::zero();
    for &x in window {
        lx = lx + log_reduce(x, scale)?;
    }
    mle_from_reductions(ly, lx, window.len(), None)
}

/// Case-b maximum-likelihood estimates. The scale estimate is
/// `h_hat = min(y, x_(1))` (the likelihood increases in `h` up to the
/// smallest observation) and the tail-index estimates reuse the case-a
/// formulas with log reductions taken against `h_hat`.
pub fn mle_case_b<F: Real>(cut: F, window: &[F]) -> Result<MleResult<F>> {
    if window.len() < 2 {
        return Err(Error::WindowTooSmall {
            needed: 2,
            got: window.len(),
        });
    }
    let mut min = cut;
    for &x in window.iter().chain(std::iter::once(&cut)) {
        if !x.is_finite() {
            return Err(Error::NonFiniteObservation(to_f64(x)));
        }
        if !(x > F::zero()) {
            return Err(Error::NonpositiveObservation(to_f64(x)));
        }
        if x < min {
            min = x;
        }
    }
    let ly = log_reduce(cut, min)?;
    let mut lx = F::zero();
    for &x in window {
        lx = lx + log_reduce(x, min)?;
    }
    mle_from_reductions(ly, lx, window.len(), Some(min))
}

fn mle_from_reductions<F: Real>(ly: F, lx: F, n: usize, h_hat: Option<F>) -> Result<MleResult<F>> {
    if ly + lx == F::zero() {
        return Err(Error::DegenerateSample);
    }
    let nf = F::from_usize(n).expect("window count fits the scalar type");
    // Interior iff 1/L(y) < n/L(x); with L(y) = 0 the left side is +inf
    // (boundary), with L(x) = 0 the right side is +inf (interior).
    let interior = ly > F::zero() && lx < nf * ly;
    if interior {
        Ok(MleResult {
            alpha_hat: nf / lx, // +inf when L(x) = 0
            rho_hat: F::one() / ly,
            h_hat,
            boundary: false,
        })
    } else {
        let pooled = (nf + F::one()) / (ly + lx);
        Ok(MleResult {
            alpha_hat: pooled,
            rho_hat: pooled,
            h_hat,
            boundary: true,
        })
    }
}

/// Case-a generalized likelihood ratio evaluated the long way: the MLEs
/// are substituted into the H0 and unrestricted likelihoods and the ratio
/// is taken in the log domain. Returns 1 on the boundary (H0 accepted
/// outright). Exists to cross-check the simplified form
/// [`simplified_likelihood_ratio`]; the two must agree to floating
/// precision.
pub fn raw_likelihood_ratio_case_a<F: Real>(cut: F, window: &[F], scale: F) -> Result<F> {
    let mle = mle_case_a(cut, window, scale)?;
    if mle.boundary {
        return Ok(F::one());
    }
    if !mle.alpha_hat.is_finite() {
        return Err(Error::DegenerateSample);
    }
    let n = F::from_usize(window.len()).expect("window count fits the scalar type");
    let ln_h = scale.ln();
    let ln_y = cut.ln();
    let sum_ln_x = window.iter().fold(F::zero(), |acc, &x| acc + x.ln());

    let ly = log_reduce(cut, scale)?;
    let mut lx = F::zero();
    for &x in window {
        lx = lx + log_reduce(x, scale)?;
    }
    let a0 = (n + F::one()) / (ly + lx);

    // log numerator: (n+1) ln a0 + a0 (n+1) ln h - (a0+1)(ln y + sum ln x)
    let log_num =
        (n + F::one()) * a0.ln() + a0 * (n + F::one()) * ln_h - (a0 + F::one()) * (ln_y + sum_ln_x);
    // log denominator:
    //   ln rho + n ln alpha + (alpha n + rho) ln h - (rho+1) ln y - (alpha+1) sum ln x
    let (a, r) = (mle.alpha_hat, mle.rho_hat);
    let log_den = r.ln() + n * a.ln() + (a * n + r) * ln_h
        - (r + F::one()) * ln_y
        - (a + F::one()) * sum_ln_x;

    Ok((log_num - log_den).exp())
}

/// Simplified case-a likelihood ratio
/// `(n+1)^(n+1) * u / (u + n)^(n+1)`, a strictly decreasing function of
/// the statistic `u` on `u > 1`.
pub fn simplified_likelihood_ratio<F: Real>(u: F, n: usize) -> F {
    let nf = F::from_usize(n).expect("window count fits the scalar type");
    let np1 = nf + F::one();
    // log domain keeps this finite for any u and scalar width
    (np1 * (np1.ln() - (u + nf).ln()) + u.ln()).exp()
}
