//! Shared domain types: extended-real scores, loss scalars, fit
//! configuration, and the rectangle / step fits every solver produces.
//!
//! A fit maps scores to one of two levels `q0 <= q1`. The rectangle fit
//! sends scores in the half-open interval `(x1, x2]` to `q1` and everything
//! else to `q0`; a step fit uses a single threshold. Because the objective
//! `sum(z_n * C(x_n))` is linear, all solvers reduce to minimizing the loss
//! mass mapped to the upper level, so the interesting state of every fit is
//! the partial loss sums per region.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use crate::error::FitError;

/// Loss scalar used by the solvers.
///
/// Implemented for `i64` (exact mode: results are bitwise comparable across
/// algorithms) and `f64` (real mode: summation order may differ between
/// algorithms, so comparisons use [`LossValue::approx_eq`]).
pub trait LossValue:
    Copy + fmt::Debug + fmt::Display + PartialEq + PartialOrd + Add<Output = Self> + Sub<Output = Self>
{
    const ZERO: Self;

    fn to_f64(self) -> f64;

    fn is_finite_loss(self) -> bool;

    /// Equality up to `rel_tol`, relative with an absolute floor of one.
    /// Exact for integers.
    fn approx_eq(self, other: Self, rel_tol: f64) -> bool;
}

impl LossValue for i64 {
    const ZERO: Self = 0;

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn is_finite_loss(self) -> bool {
        true
    }

    fn approx_eq(self, other: Self, _rel_tol: f64) -> bool {
        self == other
    }
}

impl LossValue for f64 {
    const ZERO: Self = 0.0;

    fn to_f64(self) -> f64 {
        self
    }

    fn is_finite_loss(self) -> bool {
        self.is_finite()
    }

    fn approx_eq(self, other: Self, rel_tol: f64) -> bool {
        let scale = 1.0_f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= rel_tol * scale
    }
}

/// An extended-real score. `-inf` and `+inf` are admitted as sentinels;
/// NaN is rejected at construction so scores are totally ordered.
#[derive(Clone, Copy, Debug)]
pub struct Score(f64);

impl Score {
    pub const NEG_INFINITY: Score = Score(f64::NEG_INFINITY);
    pub const INFINITY: Score = Score(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self, FitError> {
        if value.is_nan() {
            return Err(FitError::NanScore);
        }
        // Normalize -0.0 so equal scores compare and hash identically.
        Ok(Score(value + 0.0))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl TryFrom<f64> for Score {
    type Error = FitError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Score::new(value)
    }
}

impl PartialEq for Score {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Score {}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One observation: a score, its linear loss, and the arrival index used to
/// break ties between equal scores.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample<Z> {
    pub x: Score,
    pub z: Z,
    pub id: u64,
}

impl<Z: LossValue> Sample<Z> {
    pub fn new(x: Score, z: Z, id: u64) -> Self {
        Sample { x, z, id }
    }
}

/// Checks that `samples` are sorted ascending by `(x, id)` and carry
/// finite scores and losses, the precondition of every offline solver.
/// Only thresholds may be infinite.
pub fn ensure_sorted<Z: LossValue>(samples: &[Sample<Z>]) -> Result<(), FitError> {
    for (i, s) in samples.iter().enumerate() {
        if !s.x.is_finite() {
            return Err(FitError::NonFiniteScore(s.x.get()));
        }
        if !s.z.is_finite_loss() {
            return Err(FitError::NonFiniteLoss(s.z.to_f64()));
        }
        if i > 0 {
            let prev = &samples[i - 1];
            if (s.x, s.id) < (prev.x, prev.id) {
                return Err(FitError::UnsortedInput(i));
            }
        }
    }
    Ok(())
}

/// Mapping levels `q0 <= q1` plus optional loss bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitConfig {
    q0: f64,
    q1: f64,
    zl: Option<f64>,
    zu: Option<f64>,
}

impl FitConfig {
    pub fn new(q0: f64, q1: f64) -> Result<Self, FitError> {
        if !q0.is_finite() || !q1.is_finite() || q0 > q1 {
            return Err(FitError::InvalidLevels { q0, q1 });
        }
        Ok(FitConfig {
            q0,
            q1,
            zl: None,
            zu: None,
        })
    }

    /// Attaches loss bounds. When both are present they must straddle zero.
    pub fn with_bounds(mut self, zl: Option<f64>, zu: Option<f64>) -> Result<Self, FitError> {
        if let (Some(l), Some(u)) = (zl, zu) {
            if !(l <= 0.0 && 0.0 <= u) {
                return Err(FitError::InvalidBounds { zl: l, zu: u });
            }
        }
        self.zl = zl;
        self.zu = zu;
        Ok(self)
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }

    pub fn q1(&self) -> f64 {
        self.q1
    }

    pub fn bounds(&self) -> (Option<f64>, Option<f64>) {
        (self.zl, self.zu)
    }

    /// True when `z` respects the configured bounds (vacuously true for an
    /// unset side).
    pub fn loss_in_bounds(&self, z: f64) -> bool {
        self.zl.map_or(true, |l| z >= l) && self.zu.map_or(true, |u| z <= u)
    }
}

impl Default for FitConfig {
    /// Binary-classification levels `[0, 1]`.
    fn default() -> Self {
        FitConfig {
            q0: 0.0,
            q1: 1.0,
            zl: None,
            zu: None,
        }
    }
}

/// Step fit direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepDirection {
    /// Scores at or below the threshold map to `q0`, above to `q1`.
    Nondecreasing,
    /// Scores at or below the threshold map to `q1`, above to `q0`.
    Nonincreasing,
}

/// A single-threshold two-level fit over a sorted segment.
///
/// The cut sits after `rank` samples (counting from the segment's left
/// edge); `x` is the score of the last sample at or below the cut, or
/// `-inf` when the cut precedes the whole segment. Ranks are the exact
/// representation: when duplicate scores straddle the cut, `x` is a lossy
/// projection but `rank` still identifies the boundary sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepFit<Z> {
    pub direction: StepDirection,
    pub x: Score,
    /// Loss mass mapped to `q0`.
    pub l_low: Z,
    /// Loss mass mapped to `q1`; never positive because the upper-level
    /// group may always be left empty.
    pub l_high: Z,
    /// Number of samples at or below the cut.
    pub rank: usize,
}

/// The rectangular fit: scores in `(x1, x2]` map to `q1`, everything else
/// to `q0`, with the loss mass split into the three induced regions.
///
/// The empty rectangle is canonically `x1 = x2 = -inf` with `l1 = 0` and
/// the whole mass in `l2`. The optional ranks `(k, m)` locate the
/// thresholds among the sorted samples (`k` samples before the rectangle,
/// `m` at or before its right edge); they disambiguate fits whose
/// thresholds fall inside runs of duplicate scores.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RectFit<Z> {
    pub x1: Score,
    pub x2: Score,
    pub l0: Z,
    pub l1: Z,
    pub l2: Z,
    pub k: Option<usize>,
    pub m: Option<usize>,
}

impl<Z: LossValue> RectFit<Z> {
    /// The canonical empty rectangle over samples with total loss `total`.
    pub fn empty(total: Z) -> Self {
        RectFit {
            x1: Score::NEG_INFINITY,
            x2: Score::NEG_INFINITY,
            l0: Z::ZERO,
            l1: Z::ZERO,
            l2: total,
            k: Some(0),
            m: Some(0),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.x1 == Score::NEG_INFINITY && self.x2 == Score::NEG_INFINITY && self.l1 == Z::ZERO
    }

    pub fn total(&self) -> Z {
        self.l0 + self.l1 + self.l2
    }

    /// Cumulative loss of the fit under `config`:
    /// `q0 * (l0 + l2) + q1 * l1`.
    pub fn evaluate_loss(&self, config: &FitConfig) -> f64 {
        config.q0() * (self.l0 + self.l2).to_f64() + config.q1() * self.l1.to_f64()
    }

    /// Applies the transform to a score: `q1` inside `(x1, x2]`, else `q0`.
    pub fn apply(&self, config: &FitConfig, x: Score) -> f64 {
        if self.x1 < x && x <= self.x2 {
            config.q1()
        } else {
            config.q0()
        }
    }

    /// Checks the fit against the data it claims to summarize.
    ///
    /// With ranks present, the check is exact at sample granularity: `l0`,
    /// `l1`, `l2` must equal the partial sums of `z` over `[0, k)`, `[k, m)`,
    /// `[m, n)`, and `x1`/`x2` must be the score projections of those ranks
    /// (`samples[k-1].x` or `-inf`, and `samples[m-1].x`). Without ranks the
    /// sums are taken over the three score regions induced by `(x1, x2]`;
    /// that form cannot represent a fit whose thresholds split a run of
    /// duplicate scores.
    ///
    /// Real-mode sums are compared at relative tolerance `1e-9` since the
    /// solvers accumulate in different orders.
    pub fn validate(&self, samples: &[Sample<Z>]) -> Result<bool, FitError> {
        ensure_sorted(samples)?;
        if self.x1 > self.x2 {
            return Ok(false);
        }
        let mut sums = [Z::ZERO; 3];
        if let (Some(k), Some(m)) = (self.k, self.m) {
            if k > m || m > samples.len() {
                return Ok(false);
            }
            let x1 = if k == 0 {
                Score::NEG_INFINITY
            } else {
                samples[k - 1].x
            };
            let x2 = if m == 0 {
                Score::NEG_INFINITY
            } else {
                samples[m - 1].x
            };
            if self.x1 != x1 || self.x2 != x2 {
                return Ok(false);
            }
            for (i, s) in samples.iter().enumerate() {
                let region = if i < k {
                    0
                } else if i < m {
                    1
                } else {
                    2
                };
                sums[region] = sums[region] + s.z;
            }
        } else {
            for s in samples {
                let region = if s.x <= self.x1 {
                    0
                } else if s.x <= self.x2 {
                    1
                } else {
                    2
                };
                sums[region] = sums[region] + s.z;
            }
        }
        Ok(self.l0.approx_eq(sums[0], VALIDATE_REL_TOL)
            && self.l1.approx_eq(sums[1], VALIDATE_REL_TOL)
            && self.l2.approx_eq(sums[2], VALIDATE_REL_TOL))
    }
}

const VALIDATE_REL_TOL: f64 = 1e-9;

/// A fit together with its evaluated loss and the number of samples it was
/// computed from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitReport<Z> {
    pub fit: RectFit<Z>,
    pub loss: f64,
    pub n: usize,
}

impl<Z: LossValue> FitReport<Z> {
    pub fn new(fit: RectFit<Z>, config: &FitConfig, n: usize) -> Self {
        let loss = fit.evaluate_loss(config);
        FitReport { fit, loss, n }
    }
}

/// Linear losses derived from binary labels, with the implied loss bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelLosses {
    pub losses: Vec<f64>,
    pub zl: f64,
    pub zu: f64,
}

/// Reduces binary classification to linear losses.
///
/// Per label `y` with class weight `alpha` and optional sample weight `w`:
/// `z = w * (1 - (alpha + 1) * y)`, which specializes to `1 - 2y` for the
/// unweighted case. The returned bounds are `[-alpha * max_w, max_w]`.
pub fn losses_from_labels(
    labels: &[u8],
    alpha: f64,
    weights: Option<&[f64]>,
) -> Result<LabelLosses, FitError> {
    if labels.is_empty() {
        return Err(FitError::EmptyInput);
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(FitError::InvalidAlpha(alpha));
    }
    if let Some(w) = weights {
        if w.len() != labels.len() {
            return Err(FitError::WeightCountMismatch {
                labels: labels.len(),
                weights: w.len(),
            });
        }
        for (i, &v) in w.iter().enumerate() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(FitError::InvalidWeight { index: i, value: v });
            }
        }
    }

    let mut losses = Vec::with_capacity(labels.len());
    let mut max_w: f64 = 1.0;
    for (i, &y) in labels.iter().enumerate() {
        if y > 1 {
            return Err(FitError::NonBinaryLabel { index: i, value: y });
        }
        let w = weights.map_or(1.0, |ws| ws[i]);
        max_w = max_w.max(w);
        losses.push(w * (1.0 - (alpha + 1.0) * f64::from(y)));
    }
    Ok(LabelLosses {
        losses,
        zl: -alpha * max_w,
        zu: max_w,
    })
}
