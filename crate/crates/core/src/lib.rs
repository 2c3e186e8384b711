//! Optimal rectangular score transforms under linear per-sample losses.
//!
//! Given samples `(x_n, z_n)` and output levels `q0 <= q1`, the crate finds
//! the transform that maps one contiguous score interval `(x1, x2]` to `q1`
//! and the rest to `q0`, minimizing `sum(z_n * C(x_n))`. Such transforms
//! are exactly the unimodal (single-peaked) two-level maps, and minimizing
//! the linear objective reduces to finding the score interval of minimum
//! loss mass.
//!
//! Four solvers share the same model types and agree exactly in integer
//! mode:
//!
//! * [`brute_force_fit`]: cubic-time reference over all threshold pairs.
//! * [`iterative_fit`]: quadratic-time boustrophedon sweep of the pairs.
//! * [`linear_fit`]: two-scan linear-time solver for sorted batches.
//! * [`StreamEngine`]: logarithmic-per-insert streaming solver built on a
//!   balanced tree of mergeable segment summaries.
//!
//! ```
//! use rectfit::{linear_fit, FitConfig, Sample, Score, StreamEngine};
//!
//! let score = |x| Score::new(x).unwrap();
//! let samples: Vec<Sample<i64>> = [(1.0, 2), (2.0, -3), (3.0, 1), (4.0, -2), (5.0, 4)]
//!     .iter()
//!     .enumerate()
//!     .map(|(id, &(x, z))| Sample::new(score(x), z, id as u64))
//!     .collect();
//!
//! let fit = linear_fit(&samples).unwrap();
//! assert_eq!((fit.x1, fit.x2), (score(1.0), score(4.0)));
//! assert_eq!((fit.l0, fit.l1, fit.l2), (2, -4, 4));
//!
//! let config = FitConfig::default(); // levels [0, 1]
//! assert_eq!(fit.evaluate_loss(&config), -4.0);
//! assert_eq!(fit.apply(&config, score(3.0)), 1.0); // inside (x1, x2]
//! assert_eq!(fit.apply(&config, score(5.0)), 0.0);
//!
//! // The streaming engine reaches the same fit one insert at a time.
//! let mut engine = StreamEngine::new();
//! for s in &samples {
//!     engine.insert(s.x, s.z).unwrap();
//! }
//! assert_eq!(engine.current_fit(), fit);
//! ```

#![forbid(unsafe_code)]

mod error;
mod linear;
mod merge;
mod model;
mod oracle;
mod stream;

pub use error::FitError;
pub use linear::{linear_fit, linear_fit_counted, prefix_step_scan, suffix_step_scan, StepScan};
pub use merge::SegmentSummary;
pub use model::{
    ensure_sorted, losses_from_labels, FitConfig, FitReport, LabelLosses, LossValue, RectFit,
    Sample, Score, StepDirection, StepFit,
};
pub use oracle::{brute_force_fit, brute_force_fit_counted, iterative_fit, iterative_fit_counted};
pub use stream::StreamEngine;
