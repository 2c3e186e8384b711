use thiserror::Error;

/// Errors reported by fit construction, the solvers, and the streaming engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("score must not be NaN")]
    NanScore,
    #[error("sample score must be finite, got {0}")]
    NonFiniteScore(f64),
    #[error("loss must be finite, got {0}")]
    NonFiniteLoss(f64),
    #[error("mapping levels must be finite with q0 <= q1, got q0={q0}, q1={q1}")]
    InvalidLevels { q0: f64, q1: f64 },
    #[error("loss bounds must satisfy zl <= 0 <= zu, got zl={zl}, zu={zu}")]
    InvalidBounds { zl: f64, zu: f64 },
    #[error("input must contain at least one sample")]
    EmptyInput,
    #[error("samples must be sorted ascending by (score, id); violation at index {0}")]
    UnsortedInput(usize),
    #[error("label at index {index} must be 0 or 1, got {value}")]
    NonBinaryLabel { index: usize, value: u8 },
    #[error("class weight alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),
    #[error("sample weight at index {index} must be positive and finite, got {value}")]
    InvalidWeight { index: usize, value: f64 },
    #[error("got {weights} weights for {labels} labels")]
    WeightCountMismatch { labels: usize, weights: usize },
    #[error("segments overlap: left ends at {left_max} but right starts at {right_min}")]
    SegmentOverlap { left_max: f64, right_min: f64 },
}
