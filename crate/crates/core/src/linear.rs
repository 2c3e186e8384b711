//! Linear-time solver for sorted batches.
//!
//! Two single passes compute, for every prefix, the best nondecreasing
//! step fit and, for every suffix, the best nonincreasing step fit. The
//! optimal rectangle splits at some junction into exactly such a pair, so
//! one more pass over the junctions finds it. All masses and cut ranks
//! come straight out of the scan arrays; no position is revisited.

use crate::error::FitError;
use crate::model::{ensure_sorted, LossValue, RectFit, Sample, Score};

/// Step-fit scans of every prefix (or suffix) of a sorted run.
///
/// Entry `t` of a prefix scan describes the best nondecreasing step over
/// the first `t` samples: `l_high[t]` is the (never positive) mass mapped
/// to the upper level, `l_low[t]` the remainder, and `cut[t]` the number
/// of samples at or below the cut. A suffix scan is the mirror image:
/// entry `p` covers the last `p` samples with a nonincreasing step, and
/// `cut[p]` counts the upper-level samples from the suffix's left edge.
/// Ties resolve to the smallest cut.
#[derive(Clone, Debug, PartialEq)]
pub struct StepScan<Z> {
    pub l_low: Vec<Z>,
    pub l_high: Vec<Z>,
    pub cut: Vec<usize>,
}

fn scan_prefixes<Z: LossValue>(samples: &[Sample<Z>], ops: &mut u64) -> StepScan<Z> {
    let n = samples.len();
    let mut scan = StepScan {
        l_low: Vec::with_capacity(n + 1),
        l_high: Vec::with_capacity(n + 1),
        cut: Vec::with_capacity(n + 1),
    };
    scan.l_low.push(Z::ZERO);
    scan.l_high.push(Z::ZERO);
    scan.cut.push(0);
    let mut low = Z::ZERO;
    let mut high = Z::ZERO;
    let mut cut = 0usize;
    for (i, sample) in samples.iter().enumerate() {
        *ops += 1;
        high = high + sample.z;
        // A positive trailing mass can never help the upper level; fold it
        // below the cut. Zero stays, keeping the earlier cut on ties.
        if high > Z::ZERO {
            low = low + high;
            high = Z::ZERO;
            cut = i + 1;
        }
        scan.l_low.push(low);
        scan.l_high.push(high);
        scan.cut.push(cut);
    }
    scan
}

fn scan_suffixes<Z: LossValue>(samples: &[Sample<Z>], ops: &mut u64) -> StepScan<Z> {
    let n = samples.len();
    let mut scan = StepScan {
        l_low: Vec::with_capacity(n + 1),
        l_high: Vec::with_capacity(n + 1),
        cut: Vec::with_capacity(n + 1),
    };
    scan.l_low.push(Z::ZERO);
    scan.l_high.push(Z::ZERO);
    scan.cut.push(0);
    let mut low = Z::ZERO;
    let mut high = Z::ZERO;
    let mut cut = 0usize;
    for sample in samples.iter().rev() {
        *ops += 1;
        high = sample.z + high;
        // Mirror of the prefix fold; folding a zero mass here keeps the
        // smaller cut, since the cut counts from this suffix's left edge.
        if high >= Z::ZERO {
            low = low + high;
            high = Z::ZERO;
            cut = 0;
        } else {
            cut += 1;
        }
        scan.l_low.push(low);
        scan.l_high.push(high);
        scan.cut.push(cut);
    }
    scan
}

/// Best nondecreasing step fit of every prefix, in one pass.
pub fn prefix_step_scan<Z: LossValue>(samples: &[Sample<Z>]) -> Result<StepScan<Z>, FitError> {
    ensure_sorted(samples)?;
    Ok(scan_prefixes(samples, &mut 0))
}

/// Best nonincreasing step fit of every suffix, in one pass.
pub fn suffix_step_scan<Z: LossValue>(samples: &[Sample<Z>]) -> Result<StepScan<Z>, FitError> {
    ensure_sorted(samples)?;
    Ok(scan_suffixes(samples, &mut 0))
}

/// Linear-time optimal rectangle over sorted samples.
pub fn linear_fit<Z: LossValue>(samples: &[Sample<Z>]) -> Result<RectFit<Z>, FitError> {
    linear_fit_counted(samples).map(|(fit, _)| fit)
}

/// [`linear_fit`] plus the total loop iterations across the three passes,
/// which is `3n` and in particular at most `5n`.
pub fn linear_fit_counted<Z: LossValue>(
    samples: &[Sample<Z>],
) -> Result<(RectFit<Z>, u64), FitError> {
    ensure_sorted(samples)?;
    if samples.is_empty() {
        return Err(FitError::EmptyInput);
    }
    let n = samples.len();
    let mut ops = 0u64;
    let pre = scan_prefixes(samples, &mut ops);
    let suf = scan_suffixes(samples, &mut ops);

    // The rectangle `(k, m]` splits at any junction `t` between its ranks
    // into a prefix up step and a suffix down step; scanning junctions
    // recovers the minimum. The smallest optimal junction lands exactly on
    // the lexicographically smallest optimal ranks.
    let mut best_t = 0usize;
    let mut best = pre.l_high[0] + suf.l_high[n];
    for t in 1..=n {
        ops += 1;
        let mass = pre.l_high[t] + suf.l_high[n - t];
        if mass < best {
            best = mass;
            best_t = t;
        }
    }

    let total = pre.l_low[n] + pre.l_high[n];
    let fit = if best == Z::ZERO {
        RectFit::empty(total)
    } else {
        let k = pre.cut[best_t];
        let m = best_t + suf.cut[n - best_t];
        RectFit {
            x1: if k == 0 {
                Score::NEG_INFINITY
            } else {
                samples[k - 1].x
            },
            x2: samples[m - 1].x,
            l0: pre.l_low[best_t],
            l1: best,
            l2: suf.l_low[n - best_t],
            k: Some(k),
            m: Some(m),
        }
    };
    Ok((fit, ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_fit;
    use proptest::prelude::*;

    fn s(v: f64) -> Score {
        Score::new(v).unwrap()
    }

    fn samples(zs: &[i64]) -> Vec<Sample<i64>> {
        zs.iter()
            .enumerate()
            .map(|(i, &z)| Sample::new(s((i + 1) as f64), z, i as u64))
            .collect()
    }

    #[test]
    fn prefix_scan_trace() {
        let scan = prefix_step_scan(&samples(&[2, -3, 1, -2, 4])).unwrap();
        assert_eq!(scan.l_low, vec![0, 2, 2, 2, 2, 2]);
        assert_eq!(scan.l_high, vec![0, 0, -3, -2, -4, 0]);
        assert_eq!(scan.cut, vec![0, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn suffix_scan_trace() {
        let scan = suffix_step_scan(&samples(&[2, -3, 1, -2, 4])).unwrap();
        assert_eq!(scan.l_low, vec![0, 4, 4, 4, 4, 4]);
        assert_eq!(scan.l_high, vec![0, 0, -2, -1, -4, -2]);
        assert_eq!(scan.cut, vec![0, 0, 1, 2, 3, 4]);
    }

    #[test]
    fn five_sample_instance() {
        let v = samples(&[2, -3, 1, -2, 4]);
        let (fit, ops) = linear_fit_counted(&v).unwrap();
        assert_eq!(
            fit,
            RectFit {
                x1: s(1.0),
                x2: s(4.0),
                l0: 2,
                l1: -4,
                l2: 4,
                k: Some(1),
                m: Some(4),
            }
        );
        assert_eq!(ops, 3 * 5);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(linear_fit::<i64>(&[]), Err(FitError::EmptyInput));
        assert_eq!(linear_fit(&samples(&[7])).unwrap(), RectFit::empty(7));
        let neg = linear_fit(&samples(&[-5])).unwrap();
        assert_eq!((neg.x1, neg.x2, neg.l1), (Score::NEG_INFINITY, s(1.0), -5));
        let zeros = linear_fit(&samples(&[0, 0, 0])).unwrap();
        assert_eq!(zeros, RectFit::empty(0));
    }

    #[test]
    fn suffix_scan_breaks_ties_toward_the_smaller_cut() {
        // The suffix [3, -3] weighs zero either as an empty upper group or
        // as the whole pair; the scan must keep the empty one so the final
        // rectangle ends at the earliest optimal rank.
        let scan = suffix_step_scan(&samples(&[-3, 3, -3])).unwrap();
        assert_eq!(scan.l_high, vec![0, -3, 0, -3]);
        assert_eq!(scan.cut, vec![0, 1, 0, 1]);
        let fit = linear_fit(&samples(&[-3, 3, -3])).unwrap();
        assert_eq!((fit.k, fit.m), (Some(0), Some(1)));
    }

    /// Direct quadratic evaluation of the best step cut: the minimum over
    /// ranks `r` of the mass mapped high, smallest `r` on ties. For an up
    /// step that mass is the suffix `zs[r..]`, for a down step the prefix
    /// `zs[..r]`.
    fn best_cut_direct(zs: &[i64], down: bool) -> (i64, usize) {
        let mut best: Option<(i64, usize)> = None;
        for r in 0..=zs.len() {
            let mass: i64 = if down {
                zs[..r].iter().sum()
            } else {
                zs[r..].iter().sum()
            };
            if best.map_or(true, |(b, _)| mass < b) {
                best = Some((mass, r));
            }
        }
        best.unwrap()
    }

    proptest! {
        #[test]
        fn scans_match_direct_enumeration(zs in proptest::collection::vec(-9i64..=9, 0..30)) {
            let v = samples(&zs);
            let pre = prefix_step_scan(&v).unwrap();
            let suf = suffix_step_scan(&v).unwrap();
            for t in 0..=zs.len() {
                let (mass, cut) = best_cut_direct(&zs[..t], false);
                prop_assert_eq!(pre.l_high[t], mass);
                prop_assert_eq!(pre.cut[t], cut);
                let tail = &zs[zs.len() - t..];
                let (mass, cut) = best_cut_direct(tail, true);
                prop_assert_eq!(suf.l_high[t], mass);
                prop_assert_eq!(suf.cut[t], cut);
                prop_assert_eq!(pre.l_low[t] + pre.l_high[t],
                                zs[..t].iter().sum::<i64>());
                prop_assert_eq!(suf.l_low[t] + suf.l_high[t],
                                tail.iter().sum::<i64>());
            }
        }

        #[test]
        fn matches_brute_force(zs in proptest::collection::vec(-9i64..=9, 1..60)) {
            let v = samples(&zs);
            let (fit, ops) = linear_fit_counted(&v).unwrap();
            prop_assert_eq!(fit, brute_force_fit(&v).unwrap());
            prop_assert!(ops <= 5 * zs.len() as u64);
        }
    }
}
