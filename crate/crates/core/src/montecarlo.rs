//! Monte Carlo trial engine: empirical false-alarm and detection
//! probabilities, CFAR sweeps over unknown clutter parameters, and ROC
//! curves overlaying closed forms on simulation.
//!
//! Every trial regenerates a full reference window plus a CUT draw, and
//! the randomness of trial `i` is derived from `(seed, i)` alone. Trials
//! are therefore embarrassingly parallel and the hit counts are identical
//! at any thread count. Confidence intervals are Wilson 99% scores, which
//! stay honest for probabilities in the 1e-5..1e-3 range the sweeps
//! target.

use rand::SeedableRng;
use rand_pcg::Pcg64Mcg;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detect::{
    case_a_pd, case_a_statistic, case_b_pd, case_b_statistic, clairvoyant_pd, DetectorClass,
    DetectorKind, DetectorSpec,
};
use crate::error::{Error, Result};
use crate::pareto::ParetoParams;
use crate::stats::{wilson_interval, Z_99};

/// Nominal pfa below this multiple of 1/trials would leave fewer than
/// ~100 expected hits, too few for the interval checks to mean anything.
const MIN_EXPECTED_HITS: f64 = 100.0;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stafford mix13 finalizer; bijective on u64.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for one trial. For a fixed experiment seed, distinct trial
/// indices map to distinct generator seeds, so results do not depend on
/// how the index space is partitioned across workers.
fn trial_rng(seed: u64, index: u64) -> Pcg64Mcg {
    Pcg64Mcg::seed_from_u64(seed ^ mix64(index.wrapping_mul(GOLDEN).wrapping_add(GOLDEN)))
}

/// Independent seed for a labeled sub-experiment (grid point, curve point).
pub(crate) fn substream(seed: u64, label: u64) -> u64 {
    mix64(seed.wrapping_add(label.wrapping_mul(0xD1B5_4A32_D192_ED03) ^ GOLDEN))
}

/// Run `trials` independent Bernoulli trials and count hits. `trial` gets
/// a per-trial generator and a scratch window buffer.
fn count_hits<T>(trials: u64, seed: u64, window: usize, trial: T) -> Result<u64>
where
    T: Fn(&mut Pcg64Mcg, &mut [f64]) -> Result<bool> + Sync,
{
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    (0..trials as usize)
        .into_par_iter()
        .with_min_len(1 << 12)
        .try_fold(
            || (vec![0.0f64; window], 0u64),
            |state: (Vec<f64>, u64), i| -> Result<(Vec<f64>, u64)> {
                let (mut buf, hits) = state;
                let mut rng = trial_rng(seed, i as u64);
                let hit = trial(&mut rng, buf.as_mut_slice())?;
                Ok((buf, hits + hit as u64))
            },
        )
        .map(|r| r.map(|(_, hits)| hits))
        .try_reduce(|| 0u64, |a, b| Ok(a + b))
}

/// Monte Carlo estimate of a probability with its Wilson 99% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialEstimate {
    pub probability: f64,
    pub trials: u64,
    pub hits: u64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl TrialEstimate {
    pub fn from_hits(hits: u64, trials: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(hits, trials, Z_99);
        TrialEstimate {
            probability: hits as f64 / trials as f64,
            trials,
            hits,
            ci_low,
            ci_high,
        }
    }

    /// Whether the interval covers a reference probability.
    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

fn sample_window_and_cut(
    rng: &mut Pcg64Mcg,
    buf: &mut [f64],
    window_law: &ParetoParams<f64>,
    cut_law: &ParetoParams<f64>,
) -> f64 {
    for s in buf.iter_mut() {
        *s = window_law.sample(rng);
    }
    cut_law.sample(rng)
}

fn estimate_hit_rate(
    spec: &DetectorSpec<f64>,
    window_law: &ParetoParams<f64>,
    cut_law: &ParetoParams<f64>,
    trials: u64,
    seed: u64,
) -> Result<TrialEstimate> {
    let threshold = spec.threshold();
    let n = spec.window_size();
    let hits = match *spec.kind() {
        DetectorKind::Clairvoyant { .. } => count_hits(trials, seed, n, |rng, buf| {
            let cut = sample_window_and_cut(rng, buf, window_law, cut_law);
            Ok(cut > threshold)
        })?,
        DetectorKind::CaseA { scale } => count_hits(trials, seed, n, |rng, buf| {
            let cut = sample_window_and_cut(rng, buf, window_law, cut_law);
            Ok(case_a_statistic(cut, buf, scale)? > threshold)
        })?,
        DetectorKind::CaseB => count_hits(trials, seed, n, |rng, buf| {
            let cut = sample_window_and_cut(rng, buf, window_law, cut_law);
            Ok(case_b_statistic(cut, buf)? > threshold)
        })?,
    };
    Ok(TrialEstimate::from_hits(hits, trials))
}

/// Empirical false-alarm probability: window and CUT both drawn from the
/// clutter law, hit = detector fired.
///
/// ```
/// use pareto_cfar::{estimate_pfa, DetectorSpec64, ParetoParams64};
///
/// let spec = DetectorSpec64::case_a(0.7, 0.05, 4)?;
/// let clutter = ParetoParams64::new(5.0, 0.7)?;
/// let est = estimate_pfa(&spec, &clutter, 50_000, 1)?;
/// assert!(est.contains(0.05));
/// # Ok::<(), pareto_cfar::Error>(())
/// ```
pub fn estimate_pfa(
    spec: &DetectorSpec<f64>,
    clutter: &ParetoParams<f64>,
    trials: u64,
    seed: u64,
) -> Result<TrialEstimate> {
    estimate_hit_rate(spec, clutter, clutter, trials, seed)
}

/// Empirical detection probability: window from the clutter law, CUT from
/// the target law `Pa(rho, h)` with `rho <= alpha` and a shared scale.
pub fn estimate_pd(
    spec: &DetectorSpec<f64>,
    clutter: &ParetoParams<f64>,
    target: &ParetoParams<f64>,
    trials: u64,
    seed: u64,
) -> Result<TrialEstimate> {
    check_target_against_clutter(clutter, target)?;
    estimate_hit_rate(spec, clutter, target, trials, seed)
}

fn check_target_against_clutter(
    clutter: &ParetoParams<f64>,
    target: &ParetoParams<f64>,
) -> Result<()> {
    if target.shape() > clutter.shape() {
        return Err(Error::RhoExceedsAlpha {
            rho: target.shape(),
            alpha: clutter.shape(),
        });
    }
    if target.scale() != clutter.scale() {
        return Err(Error::ScaleMismatch {
            clutter: clutter.scale(),
            target: target.scale(),
        });
    }
    Ok(())
}

fn check_resolution(pfa: f64, trials: u64) -> Result<()> {
    let min = MIN_EXPECTED_HITS / trials as f64;
    if pfa < min {
        return Err(Error::PfaBelowResolution { pfa, min, trials });
    }
    Ok(())
}

/// One grid point of a CFAR sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub alpha: f64,
    pub h: f64,
    pub estimate: TrialEstimate,
}

/// Empirical pfa across a clutter-parameter grid at a fixed design pfa.
/// A CFAR detector holds every point's interval on the nominal value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub kind: DetectorClass,
    pub window_size: usize,
    pub nominal_pfa: f64,
    pub trials: u64,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    /// Every point's Wilson interval covers the nominal pfa.
    pub fn all_contain_nominal(&self) -> bool {
        self.points
            .iter()
            .all(|p| p.estimate.contains(self.nominal_pfa))
    }

    /// Two-proportion flatness test at family level `level`: the largest
    /// pairwise z statistic must stay under the Bonferroni-corrected
    /// two-sided quantile. Without the correction a maximum over dozens
    /// of pairs would trip the single-pair quantile routinely.
    pub fn is_flat(&self, level: f64) -> bool {
        self.max_pairwise_z() < self.flatness_threshold(level)
    }

    /// Bonferroni-corrected two-sided quantile for [`Self::is_flat`].
    pub fn flatness_threshold(&self, level: f64) -> f64 {
        let pairs = (self.points.len() * self.points.len().saturating_sub(1) / 2).max(1);
        crate::stats::normal_quantile(1.0 - level / (2.0 * pairs as f64))
    }

    /// Largest pooled two-proportion z statistic over point pairs.
    pub fn max_pairwise_z(&self) -> f64 {
        let mut max = 0.0f64;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                let z = crate::stats::two_proportion_z(
                    a.estimate.hits,
                    a.estimate.trials,
                    b.estimate.hits,
                    b.estimate.trials,
                )
                .abs();
                max = max.max(z);
            }
        }
        max
    }
}

/// Sweep the empirical false-alarm rate over `alpha_grid x h_grid`.
///
/// Case a knows the scale, so its `h_grid` must be the singleton holding
/// exactly that scale.
pub fn cfar_sweep(
    spec: &DetectorSpec<f64>,
    alpha_grid: &[f64],
    h_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<SweepResult> {
    if alpha_grid.is_empty() || h_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let DetectorKind::CaseA { scale } = *spec.kind() {
        if h_grid.len() != 1 || h_grid[0] != scale {
            return Err(Error::SpecMismatch(format!(
                "case-a sweep requires the singleton h grid [{scale}] (the known scale)"
            )));
        }
    }
    check_resolution(spec.design_pfa(), trials)?;

    let mut points = Vec::with_capacity(alpha_grid.len() * h_grid.len());
    for (i, &alpha) in alpha_grid.iter().enumerate() {
        for (j, &h) in h_grid.iter().enumerate() {
            let clutter = ParetoParams::new(alpha, h)?;
            let label = (i * h_grid.len() + j) as u64;
            let estimate = estimate_pfa(spec, &clutter, trials, substream(seed, label))?;
            points.push(SweepPoint { alpha, h, estimate });
        }
    }
    Ok(SweepResult {
        kind: spec.class(),
        window_size: spec.window_size(),
        nominal_pfa: spec.design_pfa(),
        trials,
        points,
    })
}

/// Where a ROC curve's detection probabilities came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RocSource {
    Theory,
    Simulation,
}

/// One operating point of a ROC curve. Simulation points carry the
/// interval and trial count; theory points leave them empty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub pfa: f64,
    pub pd: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub trials: Option<u64>,
}

/// Ordered `(pfa, pd)` curve for one detector and one `(n, alpha, rho, h)`
/// configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub source: RocSource,
    pub kind: DetectorClass,
    pub window_size: usize,
    pub alpha: f64,
    pub rho: f64,
    pub h: f64,
    pub points: Vec<RocPoint>,
}

/// Closed-form detection probability for a detector class at one
/// operating point.
pub fn theory_pd(kind: DetectorClass, pfa: f64, n: usize, alpha: f64, rho: f64) -> Result<f64> {
    match kind {
        DetectorClass::Clairvoyant => clairvoyant_pd(pfa, alpha, rho),
        DetectorClass::CaseA => case_a_pd(pfa, n, alpha, rho),
        DetectorClass::CaseB => case_b_pd(pfa, n, alpha, rho),
    }
}

fn check_grid(pfa_grid: &[f64]) -> Result<()> {
    if pfa_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if pfa_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::GridNotIncreasing);
    }
    Ok(())
}

fn check_spec_matches_clutter(spec: &DetectorSpec<f64>, clutter: &ParetoParams<f64>) -> Result<()> {
    match *spec.kind() {
        DetectorKind::Clairvoyant { clutter: known } => {
            if known != *clutter {
                return Err(Error::SpecMismatch(
                    "clairvoyant detector was built for a different clutter law".into(),
                ));
            }
        }
        DetectorKind::CaseA { scale } => {
            if scale != clutter.scale() {
                return Err(Error::SpecMismatch(format!(
                    "case-a detector knows scale {scale} but the clutter scale is {}",
                    clutter.scale()
                )));
            }
        }
        DetectorKind::CaseB => {}
    }
    Ok(())
}

/// Trace a ROC curve over a strictly increasing pfa grid, either from the
/// closed forms or by per-point simulation.
pub fn roc_curve(
    spec: &DetectorSpec<f64>,
    clutter: &ParetoParams<f64>,
    target: &ParetoParams<f64>,
    pfa_grid: &[f64],
    source: RocSource,
    trials: u64,
    seed: u64,
) -> Result<RocCurve> {
    check_grid(pfa_grid)?;
    check_target_against_clutter(clutter, target)?;
    check_spec_matches_clutter(spec, clutter)?;

    let (alpha, rho, h) = (clutter.shape(), target.shape(), clutter.scale());
    let n = spec.window_size();
    let mut points = Vec::with_capacity(pfa_grid.len());
    for (i, &pfa) in pfa_grid.iter().enumerate() {
        let at_point = spec.with_design_pfa(pfa)?;
        let point = match source {
            RocSource::Theory => RocPoint {
                pfa,
                pd: theory_pd(spec.class(), pfa, n, alpha, rho)?,
                ci_low: None,
                ci_high: None,
                trials: None,
            },
            RocSource::Simulation => {
                check_resolution(pfa, trials)?;
                let est = estimate_pd(
                    &at_point,
                    clutter,
                    target,
                    trials,
                    substream(seed, i as u64),
                )?;
                RocPoint {
                    pfa,
                    pd: est.probability,
                    ci_low: Some(est.ci_low),
                    ci_high: Some(est.ci_high),
                    trials: Some(trials),
                }
            }
        };
        points.push(point);
    }
    Ok(RocCurve {
        source,
        kind: spec.class(),
        window_size: n,
        alpha,
        rho,
        h,
        points,
    })
}

/// One pfa point of a clairvoyant-bound comparison: the three detection
/// probabilities and the bound gaps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparePoint {
    pub pfa: f64,
    pub pd_clairvoyant: f64,
    pub pd_case_a: f64,
    pub pd_case_b: f64,
    pub gap_a: f64,
    pub gap_b: f64,
}

/// Aligned clairvoyant / case-a / case-b curves over one pfa grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareResult {
    pub window_size: usize,
    pub alpha: f64,
    pub rho: f64,
    pub h: f64,
    /// 0 means the GLRT columns are closed forms; otherwise they are
    /// simulated with this many trials per point.
    pub trials: u64,
    pub points: Vec<ComparePoint>,
}

/// Compare both GLRT detectors against the clairvoyant upper bound on a
/// shared pfa grid. The clairvoyant column is always the closed form;
/// with `trials = 0` the GLRT columns are closed forms too, otherwise
/// they are simulated.
pub fn compare_to_clairvoyant(
    n: usize,
    clutter: &ParetoParams<f64>,
    target: &ParetoParams<f64>,
    pfa_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<CompareResult> {
    check_grid(pfa_grid)?;
    check_target_against_clutter(clutter, target)?;
    let (alpha, rho, h) = (clutter.shape(), target.shape(), clutter.scale());

    let spec_a = DetectorSpec::case_a(h, pfa_grid[0], n)?;
    let spec_b = DetectorSpec::case_b(pfa_grid[0], n)?;

    let mut points = Vec::with_capacity(pfa_grid.len());
    for (i, &pfa) in pfa_grid.iter().enumerate() {
        let pd_clairvoyant = clairvoyant_pd(pfa, alpha, rho)?;
        let (pd_case_a, pd_case_b) = if trials == 0 {
            (
                case_a_pd(pfa, n, alpha, rho)?,
                case_b_pd(pfa, n, alpha, rho)?,
            )
        } else {
            check_resolution(pfa, trials)?;
            let ea = estimate_pd(
                &spec_a.with_design_pfa(pfa)?,
                clutter,
                target,
                trials,
                substream(seed, 2 * i as u64),
            )?;
            let eb = estimate_pd(
                &spec_b.with_design_pfa(pfa)?,
                clutter,
                target,
                trials,
                substream(seed, 2 * i as u64 + 1),
            )?;
            (ea.probability, eb.probability)
        };
        points.push(ComparePoint {
            pfa,
            pd_clairvoyant,
            pd_case_a,
            pd_case_b,
            gap_a: pd_clairvoyant - pd_case_a,
            gap_b: pd_clairvoyant - pd_case_b,
        });
    }
    Ok(CompareResult {
        window_size: n,
        alpha,
        rho,
        h,
        trials,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pa(shape: f64, scale: f64) -> ParetoParams<f64> {
        ParetoParams::new(shape, scale).unwrap()
    }

    #[test]
    fn single_trial_is_bernoulli() {
        let spec = DetectorSpec::case_a(0.7, 0.5, 4).unwrap();
        let est = estimate_pfa(&spec, &pa(5.0, 0.7), 1, 7).unwrap();
        assert!(est.probability == 0.0 || est.probability == 1.0);
        assert_eq!(est.trials, 1);
    }

    #[test]
    fn zero_trials_rejected() {
        let spec = DetectorSpec::case_a(0.7, 0.5, 4).unwrap();
        assert_eq!(
            estimate_pfa(&spec, &pa(5.0, 0.7), 0, 7),
            Err(Error::NoTrials)
        );
    }

    #[test]
    fn estimate_matches_design_pfa_case_a() {
        let spec = DetectorSpec::case_a(0.7, 0.1, 4).unwrap();
        let est = estimate_pfa(&spec, &pa(5.0, 0.7), 1_000_000, 42).unwrap();
        assert!(
            est.contains(0.1),
            "design pfa 0.1 outside [{}, {}]",
            est.ci_low,
            est.ci_high
        );
    }

    #[test]
    fn estimate_matches_design_pfa_clairvoyant_and_case_b() {
        let clutter = pa(5.0, 0.7);
        let spec = DetectorSpec::clairvoyant(clutter, 0.05, 0).unwrap();
        let est = estimate_pfa(&spec, &clutter, 500_000, 43).unwrap();
        assert!(est.contains(0.05), "[{}, {}]", est.ci_low, est.ci_high);

        let spec = DetectorSpec::case_b(0.1, 4).unwrap();
        let est = estimate_pfa(&spec, &pa(5.0, 0.7), 1_000_000, 44).unwrap();
        assert!(est.contains(0.1), "[{}, {}]", est.ci_low, est.ci_high);
    }

    #[test]
    fn simulated_pd_matches_closed_forms_across_detectors() {
        let clutter = pa(5.0, 0.7);
        let target = pa(2.5, 0.7);
        let trials = 400_000u64;

        // clairvoyant at pfa = 1e-2: pd = pfa^(rho/alpha) = 0.1
        let spec = DetectorSpec::clairvoyant(clutter, 1e-2, 0).unwrap();
        let est = estimate_pd(&spec, &clutter, &target, trials, 71).unwrap();
        assert!(est.contains(0.1), "[{}, {}]", est.ci_low, est.ci_high);

        // case b at n = 8, pfa = 1e-3
        let spec = DetectorSpec::case_b(1e-3, 8).unwrap();
        let pd = case_b_pd(1e-3, 8, 5.0, 2.5).unwrap();
        let est = estimate_pd(&spec, &clutter, &target, trials, 72).unwrap();
        assert!(
            est.contains(pd),
            "theory {pd} outside [{}, {}]",
            est.ci_low,
            est.ci_high
        );

        // case a at n = 8, pfa = 1e-3
        let spec = DetectorSpec::case_a(0.7, 1e-3, 8).unwrap();
        let pd = case_a_pd(1e-3, 8, 5.0, 2.5).unwrap();
        let est = estimate_pd(&spec, &clutter, &target, trials, 73).unwrap();
        assert!(
            est.contains(pd),
            "theory {pd} outside [{}, {}]",
            est.ci_low,
            est.ci_high
        );
    }

    #[test]
    fn pd_reduces_to_pfa_when_target_equals_clutter() {
        let clutter = pa(5.0, 0.7);
        let spec = DetectorSpec::case_b(0.05, 4).unwrap();
        let est = estimate_pd(&spec, &clutter, &clutter, 400_000, 45).unwrap();
        assert!(est.contains(0.05), "[{}, {}]", est.ci_low, est.ci_high);
    }

    #[test]
    fn pd_validations() {
        let spec = DetectorSpec::case_b(0.05, 4).unwrap();
        assert!(matches!(
            estimate_pd(&spec, &pa(5.0, 0.7), &pa(6.0, 0.7), 10, 1),
            Err(Error::RhoExceedsAlpha { .. })
        ));
        assert!(matches!(
            estimate_pd(&spec, &pa(5.0, 0.7), &pa(2.5, 0.8), 10, 1),
            Err(Error::ScaleMismatch { .. })
        ));
    }

    #[test]
    fn determinism_across_parallelism() {
        let spec = DetectorSpec::case_b(0.01, 8).unwrap();
        let clutter = pa(7.0, 1.3);
        let baseline = estimate_pfa(&spec, &clutter, 200_000, 99).unwrap();

        for threads in [1usize, 3] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let est = pool.install(|| estimate_pfa(&spec, &clutter, 200_000, 99).unwrap());
            assert_eq!(est.hits, baseline.hits, "hits differ at {threads} threads");
            assert_eq!(est, baseline);
        }
    }

    #[test]
    fn seed_changes_the_draws() {
        let spec = DetectorSpec::case_a(0.7, 0.3, 4).unwrap();
        let clutter = pa(5.0, 0.7);
        let a = estimate_pfa(&spec, &clutter, 10_000, 1).unwrap();
        let b = estimate_pfa(&spec, &clutter, 10_000, 2).unwrap();
        assert_ne!(a.hits, b.hits);
    }

    #[test]
    fn coverage_meta_test() {
        // the Wilson 99% interval should cover the true probability in the
        // overwhelming majority of repeated runs
        for &(p, n) in &[(1e-2f64, 100_000u64), (1e-3, 100_000)] {
            let spec = DetectorSpec::case_a(0.7, p, 4).unwrap();
            let clutter = pa(5.0, 0.7);
            let covered = (0..20)
                .filter(|&rep| {
                    estimate_pfa(&spec, &clutter, n, 1000 + rep)
                        .unwrap()
                        .contains(p)
                })
                .count();
            assert!(covered >= 19, "only {covered}/20 runs covered p = {p}");
        }
    }

    #[test]
    fn sweep_single_point_reduces_to_estimate_pfa() {
        let spec = DetectorSpec::case_a(0.7, 0.01, 4).unwrap();
        let sweep = cfar_sweep(&spec, &[5.0], &[0.7], 100_000, 7).unwrap();
        assert_eq!(sweep.points.len(), 1);
        let direct = estimate_pfa(&spec, &pa(5.0, 0.7), 100_000, substream(7, 0)).unwrap();
        assert_eq!(sweep.points[0].estimate, direct);
        assert_eq!(sweep.nominal_pfa, 0.01);
    }

    #[test]
    fn sweep_is_flat_for_case_b() {
        let spec = DetectorSpec::case_b(0.01, 4).unwrap();
        let sweep = cfar_sweep(&spec, &[5.0, 12.0], &[0.5, 2.0], 200_000, 11).unwrap();
        assert_eq!(sweep.points.len(), 4);
        assert!(sweep.all_contain_nominal());
        assert!(sweep.is_flat(0.01), "max z {}", sweep.max_pairwise_z());
        // 6 pairs at family level 1%: corrected quantile above the
        // single-pair value
        assert!(sweep.flatness_threshold(0.01) > crate::stats::Z_TWO_PROP_1PCT);
    }

    #[test]
    fn sweep_validations() {
        let spec = DetectorSpec::case_a(0.7, 0.01, 4).unwrap();
        assert_eq!(
            cfar_sweep(&spec, &[], &[0.7], 1000, 1),
            Err(Error::EmptyGrid)
        );
        assert!(matches!(
            cfar_sweep(&spec, &[5.0], &[0.5, 2.0], 100_000, 1),
            Err(Error::SpecMismatch(_))
        ));
        assert!(matches!(
            cfar_sweep(&spec, &[5.0], &[0.8], 100_000, 1),
            Err(Error::SpecMismatch(_))
        ));
        // nominal pfa below the 100-hit resolution floor
        let tight = DetectorSpec::case_a(0.7, 1e-5, 4).unwrap();
        assert!(matches!(
            cfar_sweep(&tight, &[5.0], &[0.7], 1000, 1),
            Err(Error::PfaBelowResolution { .. })
        ));
    }

    #[test]
    fn theory_roc_clairvoyant_is_sqrt_pfa_at_half_ratio() {
        let clutter = pa(5.0, 0.7);
        let target = pa(2.5, 0.7);
        let spec = DetectorSpec::clairvoyant(clutter, 0.01, 0).unwrap();
        let grid = [1e-4, 1e-3, 1e-2, 1e-1];
        let curve = roc_curve(&spec, &clutter, &target, &grid, RocSource::Theory, 0, 0).unwrap();
        for p in &curve.points {
            assert_relative_eq!(p.pd, p.pfa.sqrt(), max_relative = 1e-12);
        }
        // theory pd is nondecreasing in pfa
        assert!(curve.points.windows(2).all(|w| w[1].pd >= w[0].pd));
    }

    #[test]
    fn theory_and_simulation_agree_on_small_grid() {
        let clutter = pa(5.0, 0.7);
        let target = pa(2.5, 0.7);
        let spec = DetectorSpec::case_a(0.7, 0.01, 4).unwrap();
        let grid = [1e-2, 1e-1];
        let trials = 200_000u64;
        let theory = roc_curve(&spec, &clutter, &target, &grid, RocSource::Theory, 0, 0).unwrap();
        let sim = roc_curve(
            &spec,
            &clutter,
            &target,
            &grid,
            RocSource::Simulation,
            trials,
            21,
        )
        .unwrap();
        for (t, s) in theory.points.iter().zip(&sim.points) {
            let sigma = (t.pd * (1.0 - t.pd) / trials as f64).sqrt();
            assert!(
                (s.pd - t.pd).abs() <= 3.0 * sigma,
                "pd_sim {} vs pd_theory {} beyond 3 sigma {}",
                s.pd,
                t.pd,
                sigma
            );
        }
    }

    #[test]
    fn single_point_grid_gives_a_one_point_curve() {
        let clutter = pa(5.0, 0.7);
        let target = pa(2.5, 0.7);
        let spec = DetectorSpec::case_b(0.01, 4).unwrap();
        let curve = roc_curve(&spec, &clutter, &target, &[1e-2], RocSource::Theory, 0, 0).unwrap();
        assert_eq!(curve.points.len(), 1);
        assert_relative_eq!(
            curve.points[0].pd,
            crate::detect::case_b_pd(1e-2, 4, 5.0, 2.5).unwrap(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn roc_validations() {
        let clutter = pa(5.0, 0.7);
        let target = pa(2.5, 0.7);
        let spec = DetectorSpec::case_a(0.7, 0.01, 4).unwrap();
        assert_eq!(
            roc_curve(&spec, &clutter, &target, &[], RocSource::Theory, 0, 0),
            Err(Error::EmptyGrid)
        );
        assert_eq!(
            roc_curve(
                &spec,
                &clutter,
                &target,
                &[1e-2, 1e-2],
                RocSource::Theory,
                0,
                0
            ),
            Err(Error::GridNotIncreasing)
        );
        // a simulated point below the resolution floor is rejected
        assert!(matches!(
            roc_curve(
                &spec,
                &clutter,
                &target,
                &[1e-5, 1e-2],
                RocSource::Simulation,
                10_000,
                0
            ),
            Err(Error::PfaBelowResolution { .. })
        ));
        // mismatched known scale
        let wrong = DetectorSpec::case_a(0.9, 0.01, 4).unwrap();
        assert!(matches!(
            roc_curve(&wrong, &clutter, &target, &[1e-2], RocSource::Theory, 0, 0),
            Err(Error::SpecMismatch(_))
        ));
    }

    #[test]
    fn compare_collapses_when_target_equals_clutter() {
        let clutter = pa(5.0, 0.7);
        let grid = [1e-3, 1e-2, 1e-1];
        let cmp = compare_to_clairvoyant(4, &clutter, &clutter, &grid, 0, 0).unwrap();
        for p in &cmp.points {
            assert_relative_eq!(p.pd_clairvoyant, p.pfa, max_relative = 1e-12);
            assert_relative_eq!(p.pd_case_a, p.pfa, max_relative = 1e-12);
            assert_relative_eq!(p.pd_case_b, p.pfa, max_relative = 1e-12);
        }
    }

    #[test]
    fn compare_orders_detectors_and_shrinks_gap_with_window() {
        let clutter = pa(5.0, 0.7);
        let target = pa(2.5, 0.7);
        let grid = [1e-3, 1e-2, 1e-1];
        let c4 = compare_to_clairvoyant(4, &clutter, &target, &grid, 0, 0).unwrap();
        let c8 = compare_to_clairvoyant(8, &clutter, &target, &grid, 0, 0).unwrap();
        for (p4, p8) in c4.points.iter().zip(&c8.points) {
            assert!(p4.pd_clairvoyant >= p4.pd_case_a);
            assert!(p4.gap_a >= 0.0);
            assert!(
                p8.gap_a <= p4.gap_a,
                "n=8 gap {} vs n=4 gap {}",
                p8.gap_a,
                p4.gap_a
            );
            assert!(p8.gap_b <= p4.gap_b);
        }
    }

    #[test]
    fn substreams_are_spread_out() {
        let a = substream(1, 0);
        let b = substream(1, 1);
        let c = substream(2, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }
}
