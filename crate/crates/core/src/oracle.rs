//! Reference solvers over sorted samples: a literal enumeration of every
//! rectangle and a quadratic sweep that reuses the running interval mass.
//! Both anchor the faster solvers in tests; the sweep is also the fastest
//! exact option when comparison counts matter more than asymptotics.

use crate::error::FitError;
use crate::model::{ensure_sorted, LossValue, RectFit, Sample, Score};

fn sum<Z: LossValue>(samples: &[Sample<Z>]) -> Z {
    samples.iter().fold(Z::ZERO, |acc, s| acc + s.z)
}

/// Builds the rectangle for rank pair `(k, m)` (samples `k..m` inside),
/// or the canonical empty rectangle when no pair was selected.
fn build_rect<Z: LossValue>(
    samples: &[Sample<Z>],
    l1: Z,
    ranks: Option<(usize, usize)>,
) -> RectFit<Z> {
    match ranks {
        None => RectFit::empty(sum(samples)),
        Some((k, m)) => RectFit {
            x1: if k == 0 {
                Score::NEG_INFINITY
            } else {
                samples[k - 1].x
            },
            x2: samples[m - 1].x,
            l0: sum(&samples[..k]),
            l1,
            l2: sum(&samples[m..]),
            k: Some(k),
            m: Some(m),
        },
    }
}

/// Exhaustive reference solver: sums every interval from scratch.
///
/// Ties resolve to the empty rectangle first, then to the
/// lexicographically smallest `(k, m)`; every other solver reproduces this
/// choice. Cubic time, linear space.
pub fn brute_force_fit<Z: LossValue>(samples: &[Sample<Z>]) -> Result<RectFit<Z>, FitError> {
    brute_force_fit_counted(samples).map(|(fit, _)| fit)
}

/// [`brute_force_fit`] plus the number of loss additions performed.
pub fn brute_force_fit_counted<Z: LossValue>(
    samples: &[Sample<Z>],
) -> Result<(RectFit<Z>, u64), FitError> {
    ensure_sorted(samples)?;
    if samples.is_empty() {
        return Err(FitError::EmptyInput);
    }
    let n = samples.len();
    let mut ops = 0u64;
    let mut best = Z::ZERO;
    let mut best_ranks = None;
    for k in 0..n {
        for m in (k + 1)..=n {
            let mut l1 = Z::ZERO;
            for s in &samples[k..m] {
                l1 = l1 + s.z;
                ops += 1;
            }
            // Strict improvement in lexicographic visit order keeps the
            // smallest optimal ranks; the zero-initialized best keeps the
            // empty rectangle ahead of every nonnegative interval.
            if l1 < best {
                best = l1;
                best_ranks = Some((k, m));
            }
        }
    }
    Ok((build_rect(samples, best, best_ranks), ops))
}

/// Quadratic sweep visiting every rank pair once.
///
/// The pairs `(k, m)` are walked boustrophedon: for even `k` the right
/// rank ascends to `n`, the sweep then steps to `k + 1` in place; for odd
/// `k` it descends back to `k + 1` and restarts on the diagonal. Each move
/// changes the interval by one sample, so the running mass needs exactly
/// one update per pair visited.
pub fn iterative_fit<Z: LossValue>(samples: &[Sample<Z>]) -> Result<RectFit<Z>, FitError> {
    iterative_fit_counted(samples).map(|(fit, _)| fit)
}

/// [`iterative_fit`] plus the number of rank pairs visited, which is
/// exactly `n * (n + 1) / 2`.
pub fn iterative_fit_counted<Z: LossValue>(
    samples: &[Sample<Z>],
) -> Result<(RectFit<Z>, u64), FitError> {
    ensure_sorted(samples)?;
    if samples.is_empty() {
        return Err(FitError::EmptyInput);
    }
    let n = samples.len();
    let mut visited = 0u64;
    let mut best = Z::ZERO;
    let mut best_ranks: Option<(usize, usize)> = None;
    let mut k = 0usize;
    let mut m = 1usize;
    let mut l1 = samples[0].z;
    loop {
        visited += 1;
        // The sweep visits pairs out of lexicographic order, so equal
        // masses fall back to an explicit rank comparison; the empty
        // rectangle still wins every tie at zero.
        if l1 < best || (l1 == best && best_ranks.map_or(false, |b| (k, m) < b)) {
            best = l1;
            best_ranks = Some((k, m));
        }
        if k % 2 == 0 {
            if m < n {
                l1 = l1 + samples[m].z;
                m += 1;
            } else if k + 1 < n {
                l1 = l1 - samples[k].z;
                k += 1;
            } else {
                break;
            }
        } else if m > k + 1 {
            m -= 1;
            l1 = l1 - samples[m].z;
        } else if k + 1 < n {
            k += 1;
            m = k + 1;
            l1 = samples[k].z;
        } else {
            break;
        }
    }
    Ok((build_rect(samples, best, best_ranks), visited))
}
