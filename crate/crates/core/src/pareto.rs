//! Two-parameter Pareto distribution and the transformed laws the
//! detection statistics reduce to.
//!
//! For `Y ~ Pa(alpha, h)` the cdf is `F(y) = 1 - (h/y)^alpha` on
//! `[h, inf)`. The detectors never work on the raw intensities directly
//! but on log reductions `ln(value/reference)`, which turn Pareto samples
//! into exponentials: `ln(Y/h) ~ Exp(alpha)`. [`DerivedLaw`] collects the
//! reference distributions those reductions follow; they are evaluation
//! oracles for tests and the validation suite, never part of the
//! detection path.

use rand::distr::{Distribution, Open01};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Real;

/// Shape/scale pair of a two-parameter Pareto law.
///
/// `shape` is the tail index (smaller means heavier tail, stronger
/// returns); `scale` is the left support endpoint in intensity units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParetoParams<F> {
    shape: F,
    scale: F,
}

impl<F: Real> ParetoParams<F> {
    /// Construct, rejecting non-positive shape or scale.
    pub fn new(shape: F, scale: F) -> Result<Self> {
        if !(shape > F::zero()) || !shape.is_finite() {
            return Err(Error::InvalidShape(to_f64(shape)));
        }
        if !(scale > F::zero()) || !scale.is_finite() {
            return Err(Error::InvalidScale(to_f64(scale)));
        }
        Ok(Self { shape, scale })
    }

    pub fn shape(&self) -> F {
        self.shape
    }

    pub fn scale(&self) -> F {
        self.scale
    }

    /// Cumulative distribution function, `1 - (h/y)^alpha` for `y >= h`.
    pub fn cdf(&self, y: F) -> F {
        if y < self.scale {
            F::zero()
        } else {
            // -expm1(alpha * ln(h/y)) keeps precision near the support edge.
            -(self.shape * (self.scale / y).ln()).exp_m1()
        }
    }

    /// Survival function, `(h/y)^alpha` for `y >= h`.
    pub fn sf(&self, y: F) -> F {
        if y < self.scale {
            F::one()
        } else {
            (self.scale / y).powf(self.shape)
        }
    }

    /// Probability density, `alpha h^alpha / y^(alpha+1)` on `[h, inf)`.
    pub fn pdf(&self, y: F) -> F {
        if y < self.scale {
            F::zero()
        } else {
            (self.shape / y) * (self.scale / y).powf(self.shape)
        }
    }

    /// Inverse-transform map from a uniform draw `u` in `(0, 1]` to a
    /// Pareto sample `h * u^(-1/alpha)`. `u = 1` maps to the support edge.
    pub fn from_uniform(&self, u: F) -> F {
        self.scale * u.powf(-F::one() / self.shape)
    }

    /// Draw one sample by inverse transform.
    ///
    /// Uniform draws come from the open interval (0, 1): `u = 0` would map
    /// to an infinite intensity.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> F
    where
        Open01: Distribution<F>,
    {
        self.from_uniform(rng.sample(Open01))
    }
}

fn to_f64<F: Real>(x: F) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `ln(value/reference)` for `value >= reference > 0`.
///
/// Heavy-tailed data produce extreme ratios, so when `value/reference`
/// overflows the reduction falls back to `ln(value) - ln(reference)`.
/// Every log-ratio in the detection path routes through here.
pub fn log_reduce<F: Real>(value: F, reference: F) -> Result<F> {
    if !(reference > F::zero()) || value < reference || value.is_nan() {
        return Err(Error::LogDomain {
            value: to_f64(value),
            reference: to_f64(reference),
        });
    }
    let ratio = value / reference;
    if ratio.is_finite() {
        Ok(ratio.ln())
    } else {
        Ok(value.ln() - reference.ln())
    }
}

/// Density of `G = ln(Y/h) - ln(X_(1)/h)` under H0, the difference of an
/// `Exp(rate)` and an independent `Exp(n * rate)` variable:
/// `n/(n+1) * rate * exp(-rate*g)` for `g > 0` and
/// `n/(n+1) * rate * exp(n*rate*g)` for `g < 0`.
pub fn g_density<F: Real>(g: F, n: usize, rate: F) -> F {
    assert!(n >= 1, "g_density needs a window of at least one cell");
    let nf = F::from_usize(n).expect("window count fits the scalar type");
    let front = nf / (nf + F::one()) * rate;
    if g > F::zero() {
        front * (-rate * g).exp()
    } else {
        front * (nf * rate * g).exp()
    }
}

/// Reference laws for the log-reduced statistics. Test-side oracles only:
/// the detectors never sample from or depend on these.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivedLaw<F> {
    /// `ln(Y/h)` for `Y ~ Pa(alpha, h)`: exponential with the given rate.
    ExpRate { rate: F },
    /// Sum of `count` iid exponentials: gamma with integer shape `count`
    /// and the given scale factor.
    GammaInt { count: usize, scale: F },
    /// Minimum of `n` iid `Pa(alpha, h)` samples: `Pa(n*alpha, h)`.
    ParetoMin { shape: F, scale: F },
    /// Difference `ln(Y/h) - ln(X_(1)/h)` under H0 with window count `n`.
    DiffExp { n: usize, rate: F },
}

impl<F: Real> DerivedLaw<F> {
    pub fn cdf(&self, x: F) -> F {
        match *self {
            DerivedLaw::ExpRate { rate } => {
                if x <= F::zero() {
                    F::zero()
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            DerivedLaw::GammaInt { count, scale } => erlang_cdf(count, scale, x),
            DerivedLaw::ParetoMin { shape, scale } => {
                // Same closed form as the Pareto cdf.
                if x < scale {
                    F::zero()
                } else {
                    -(shape * (scale / x).ln()).exp_m1()
                }
            }
            DerivedLaw::DiffExp { n, rate } => {
                let nf = F::from_usize(n).expect("window count fits the scalar type");
                if x < F::zero() {
                    (nf * rate * x).exp() / (nf + F::one())
                } else {
                    F::one() - nf / (nf + F::one()) * (-rate * x).exp()
                }
            }
        }
    }
}

/// Erlang (integer-shape gamma) cdf:
/// `P(k, t) = 1 - exp(-t) * sum_{j<k} t^j / j!` with `t = x / scale`.
fn erlang_cdf<F: Real>(count: usize, scale: F, x: F) -> F {
    assert!(count >= 1, "gamma shape count must be at least 1");
    if x <= F::zero() {
        return F::zero();
    }
    let t = x / scale;
    let mut term = F::one();
    let mut sum = F::one();
    for j in 1..count {
        term = term * t / F::from_usize(j).expect("gamma shape fits the scalar type");
        sum = sum + term;
    }
    F::one() - (-t).exp() * sum
}
