//! Synthetic range profiles and sliding-window detection.
//!
//! A profile is one sweep of range cells: clutter cells drawn from
//! `Pa(alpha, h)` and target cells drawn from `Pa(rho, h)` (targets
//! replace the clutter in their cell; the hypothesis test is a
//! replacement model, not superposition). Scanning slides the CUT across
//! the profile; the reference window takes `half_window` cells per side
//! after skipping `guard` cells next to the CUT, leading cells first,
//! then lagging. Edge cells without a full symmetric window produce no
//! decision.

use rand::SeedableRng;
use rand_pcg::Pcg64Mcg;
use serde::{Deserialize, Serialize};

use crate::detect::{DetectionInput, DetectorSpec};
use crate::error::{Error, Result};
use crate::pareto::ParetoParams;

/// A target cell: index and the tail index `rho` of its return.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetSpec {
    pub cell: usize,
    pub shape: f64,
}

/// Geometry and statistics of one synthetic profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileConfig {
    pub cell_count: usize,
    pub clutter: ParetoParams<f64>,
    pub targets: Vec<TargetSpec>,
    /// Reference cells per side; the detector window size is twice this.
    pub half_window: usize,
    /// Guard cells per side between the CUT and the reference window.
    pub guard: usize,
    pub seed: u64,
}

impl ProfileConfig {
    pub fn validate(&self) -> Result<()> {
        if self.half_window < 1 {
            return Err(Error::WindowTooSmall {
                needed: 1,
                got: self.half_window,
            });
        }
        if self.cell_count < 2 * (self.half_window + self.guard) + 1 {
            return Err(Error::ProfileTooShort {
                got: self.cell_count,
                half_window: self.half_window,
                guard: self.guard,
            });
        }
        let mut seen = std::collections::HashSet::new();
        for t in &self.targets {
            if t.cell >= self.cell_count {
                return Err(Error::TargetOutOfRange {
                    index: t.cell,
                    cells: self.cell_count,
                });
            }
            if !seen.insert(t.cell) {
                return Err(Error::DuplicateTarget(t.cell));
            }
            if t.shape > self.clutter.shape() {
                return Err(Error::RhoExceedsAlpha {
                    rho: t.shape,
                    alpha: self.clutter.shape(),
                });
            }
            // reuses the shape validation
            ParetoParams::new(t.shape, self.clutter.scale())?;
        }
        Ok(())
    }

    /// Detector window size implied by the symmetric split.
    pub fn window_size(&self) -> usize {
        2 * self.half_window
    }

    /// Pairs of targets close enough that one sits in the other's
    /// reference window. The scan still runs (the robustness study is out
    /// of scope) but callers should surface the flag.
    pub fn interfering_targets(&self) -> Vec<(usize, usize)> {
        let reach = self.half_window + self.guard;
        let mut cells: Vec<usize> = self.targets.iter().map(|t| t.cell).collect();
        cells.sort_unstable();
        let mut pairs = Vec::new();
        for (i, &a) in cells.iter().enumerate() {
            for &b in &cells[i + 1..] {
                if b - a <= reach {
                    pairs.push((a, b));
                }
            }
        }
        pairs
    }
}

/// Generated intensities plus which cells hold targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeProfile {
    pub cells: Vec<f64>,
    /// Sorted target indices.
    pub targets: Vec<usize>,
}

impl RangeProfile {
    pub fn is_target(&self, index: usize) -> bool {
        self.targets.binary_search(&index).is_ok()
    }
}

/// Draw one profile. Cells are mutually independent; generation is a
/// single sequential seeded stream, so a config reproduces its profile
/// exactly.
pub fn generate_profile(config: &ProfileConfig) -> Result<RangeProfile> {
    config.validate()?;
    let mut shape_overrides = std::collections::HashMap::new();
    for t in &config.targets {
        let law = ParetoParams::new(t.shape, config.clutter.scale())?;
        shape_overrides.insert(t.cell, law);
    }
    let mut rng = Pcg64Mcg::seed_from_u64(config.seed);
    let cells = (0..config.cell_count)
        .map(|i| {
            shape_overrides
                .get(&i)
                .unwrap_or(&config.clutter)
                .sample(&mut rng)
        })
        .collect();
    let mut targets: Vec<usize> = config.targets.iter().map(|t| t.cell).collect();
    targets.sort_unstable();
    Ok(RangeProfile { cells, targets })
}

/// Decision record for one eligible CUT.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellDecision {
    pub index: usize,
    pub statistic: f64,
    pub threshold: f64,
    pub target_present: bool,
}

/// Scan output: one record per cell with a full symmetric window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileScan {
    pub cells: Vec<CellDecision>,
}

impl ProfileScan {
    pub fn detections(&self) -> usize {
        self.cells.iter().filter(|c| c.target_present).count()
    }
}

/// Slide the detector across the profile.
///
/// For each eligible CUT index the window is assembled as the
/// `half_window` leading reference cells (ascending index) followed by
/// the `half_window` lagging ones, guard cells skipped. Every record
/// equals what [`DetectorSpec::detect`] returns on that assembled input.
pub fn scan_profile(
    profile: &[f64],
    spec: &DetectorSpec<f64>,
    guard: usize,
) -> Result<ProfileScan> {
    let n = spec.window_size();
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::SpecMismatch(format!(
            "sliding-window scan needs an even window size of at least 2, got {n}"
        )));
    }
    let half = n / 2;
    if profile.len() < 2 * (half + guard) + 1 {
        return Err(Error::ProfileTooShort {
            got: profile.len(),
            half_window: half,
            guard,
        });
    }

    let first = half + guard;
    let last = profile.len() - half - guard; // exclusive
    let mut window = vec![0.0f64; n];
    let mut cells = Vec::with_capacity(last - first);
    for cut_index in first..last {
        let lead_start = cut_index - guard - half;
        let lag_start = cut_index + guard + 1;
        window[..half].copy_from_slice(&profile[lead_start..lead_start + half]);
        window[half..].copy_from_slice(&profile[lag_start..lag_start + half]);
        let decision = spec.detect(&DetectionInput::new(profile[cut_index], &window))?;
        cells.push(CellDecision {
            index: cut_index,
            statistic: decision.statistic,
            threshold: decision.threshold,
            target_present: decision.target_present,
        });
    }
    Ok(ProfileScan { cells })
}
