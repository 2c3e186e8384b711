//! Mergeable segment summaries, the algebra behind the streaming solver.
//!
//! A summary condenses a sorted run of samples into the partial fits that
//! stay relevant under concatenation: the best nondecreasing step, the best
//! nonincreasing step, and the best rectangle, each with its loss masses
//! and cut ranks. Two adjacent summaries merge in constant time, so any
//! bracketing of leaf merges yields the same summary and a balanced tree of
//! them maintains the optimal rectangle incrementally.

use crate::error::FitError;
use crate::model::{ensure_sorted, LossValue, RectFit, Sample, Score, StepDirection, StepFit};

/// Summary of a contiguous sorted run of samples.
///
/// Invariants, established by [`SegmentSummary::leaf`] and preserved by
/// [`SegmentSummary::merge`]:
///
/// * `s` is the total loss and `n` the sample count of the run;
/// * `up` and `down` are the loss-minimal step fits over the run, taking
///   the smallest cut rank on ties, so `l_high <= 0` always (the high
///   group may be left empty);
/// * `rect` is the loss-minimal rectangle: the canonical empty rectangle
///   when no interval has negative mass, otherwise the one with
///   lexicographically smallest ranks `(k, m)`.
///
/// The summary of zero samples uses `xmin = +inf`, `xmax = -inf` so that
/// it merges as an identity on either side. Ranks count positions within
/// the run; sample ids do not appear, so runs of equal scores are ordered
/// by whatever id order the caller established.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentSummary<Z> {
    pub n: usize,
    pub xmin: Score,
    pub xmax: Score,
    pub s: Z,
    pub up: StepFit<Z>,
    pub down: StepFit<Z>,
    pub rect: RectFit<Z>,
}

impl<Z: LossValue> SegmentSummary<Z> {
    /// The summary of zero samples, the identity of [`SegmentSummary::merge`].
    pub fn empty() -> Self {
        let cut_before_all = |direction| StepFit {
            direction,
            x: Score::NEG_INFINITY,
            l_low: Z::ZERO,
            l_high: Z::ZERO,
            rank: 0,
        };
        SegmentSummary {
            n: 0,
            xmin: Score::INFINITY,
            xmax: Score::NEG_INFINITY,
            s: Z::ZERO,
            up: cut_before_all(StepDirection::Nondecreasing),
            down: cut_before_all(StepDirection::Nonincreasing),
            rect: RectFit::empty(Z::ZERO),
        }
    }

    /// The summary of a single sample.
    pub fn leaf(x: Score, z: Z) -> Self {
        let up = if z > Z::ZERO {
            // Cutting after the sample keeps the high group empty.
            StepFit {
                direction: StepDirection::Nondecreasing,
                x,
                l_low: z,
                l_high: Z::ZERO,
                rank: 1,
            }
        } else {
            StepFit {
                direction: StepDirection::Nondecreasing,
                x: Score::NEG_INFINITY,
                l_low: Z::ZERO,
                l_high: z,
                rank: 0,
            }
        };
        let down = if z < Z::ZERO {
            StepFit {
                direction: StepDirection::Nonincreasing,
                x,
                l_low: Z::ZERO,
                l_high: z,
                rank: 1,
            }
        } else {
            StepFit {
                direction: StepDirection::Nonincreasing,
                x: Score::NEG_INFINITY,
                l_low: z,
                l_high: Z::ZERO,
                rank: 0,
            }
        };
        let rect = if z < Z::ZERO {
            RectFit {
                x1: Score::NEG_INFINITY,
                x2: x,
                l0: Z::ZERO,
                l1: z,
                l2: Z::ZERO,
                k: Some(0),
                m: Some(1),
            }
        } else {
            RectFit::empty(z)
        };
        SegmentSummary {
            n: 1,
            xmin: x,
            xmax: x,
            s: z,
            up,
            down,
            rect,
        }
    }

    /// Merges two summaries of adjacent runs, `self` to the left of
    /// `right`. Fails when the runs overlap; runs may share a boundary
    /// score (equal scores are ordered by id on the caller's side).
    pub fn merge(&self, right: &Self) -> Result<Self, FitError> {
        if self.xmax > right.xmin {
            return Err(FitError::SegmentOverlap {
                left_max: self.xmax.get(),
                right_min: right.xmin.get(),
            });
        }
        Ok(self.merge_unchecked(right))
    }

    pub(crate) fn merge_unchecked(&self, right: &Self) -> Self {
        let (a, b) = (self, right);
        let total = a.s + b.s;

        // A cut of the concatenation lies in one operand; the other
        // operand's mass joins the matching side wholesale. Cuts at rank 0
        // of the right operand sit on the boundary, so their threshold is
        // the left operand's maximum. Ties keep the left option, the
        // smaller rank.
        let up_left = StepFit {
            direction: StepDirection::Nondecreasing,
            x: a.up.x,
            l_low: a.up.l_low,
            l_high: a.up.l_high + b.s,
            rank: a.up.rank,
        };
        let up_right = StepFit {
            direction: StepDirection::Nondecreasing,
            x: if b.up.rank == 0 { a.xmax } else { b.up.x },
            l_low: a.s + b.up.l_low,
            l_high: b.up.l_high,
            rank: a.n + b.up.rank,
        };
        let up = if up_right.l_high < up_left.l_high {
            up_right
        } else {
            up_left
        };

        let down_left = StepFit {
            direction: StepDirection::Nonincreasing,
            x: a.down.x,
            l_low: a.down.l_low + b.s,
            l_high: a.down.l_high,
            rank: a.down.rank,
        };
        let down_right = StepFit {
            direction: StepDirection::Nonincreasing,
            x: if b.down.rank == 0 { a.xmax } else { b.down.x },
            l_low: b.down.l_low,
            l_high: a.s + b.down.l_high,
            rank: a.n + b.down.rank,
        };
        let down = if down_right.l_high < down_left.l_high {
            down_right
        } else {
            down_left
        };

        // The optimal rectangle lies inside the left run, inside the right
        // run, or straddles the boundary, in which case it is the left
        // run's best up cut joined with the right run's best down cut.
        // Selection compares the three interval masses directly; any
        // candidate may win regardless of the mass outside it. Preference
        // order left, straddle, right realizes the lexicographic rank
        // policy because sub-summaries are themselves canonical.
        let cand_left = RectFit {
            l2: a.rect.l2 + b.s,
            ..a.rect
        };
        let cand_straddle = RectFit {
            x1: a.up.x,
            x2: if b.down.rank == 0 { a.xmax } else { b.down.x },
            l0: a.up.l_low,
            l1: a.up.l_high + b.down.l_high,
            l2: b.down.l_low,
            k: Some(a.up.rank),
            m: Some(a.n + b.down.rank),
        };
        let cand_right = if b.rect.is_empty() {
            RectFit::empty(total)
        } else {
            RectFit {
                x1: if b.rect.k == Some(0) {
                    a.xmax
                } else {
                    b.rect.x1
                },
                x2: b.rect.x2,
                l0: a.s + b.rect.l0,
                l1: b.rect.l1,
                l2: b.rect.l2,
                k: b.rect.k.map(|k| a.n + k),
                m: b.rect.m.map(|m| a.n + m),
            }
        };
        let mut rect = cand_left;
        if cand_straddle.l1 < rect.l1 {
            rect = cand_straddle;
        }
        if cand_right.l1 < rect.l1 {
            rect = cand_right;
        }
        if rect.l1 == Z::ZERO {
            rect = RectFit::empty(total);
        }

        SegmentSummary {
            n: a.n + b.n,
            xmin: a.xmin.min(b.xmin),
            xmax: a.xmax.max(b.xmax),
            s: total,
            up,
            down,
            rect,
        }
    }

    /// Folds sorted samples into one summary, left to right.
    pub fn fold_sorted(samples: &[Sample<Z>]) -> Result<Self, FitError> {
        ensure_sorted(samples)?;
        let mut acc = SegmentSummary::empty();
        for s in samples {
            acc = acc.merge_unchecked(&SegmentSummary::leaf(s.x, s.z));
        }
        Ok(acc)
    }
}
