//! JSON records for fits. JSON has no literal infinities, so open-ended
//! thresholds serialize as the strings `"inf"` and `"-inf"`.

use rectfit::{FitConfig, LossValue, RectFit, Score};
use serde_json::{json, Value};

/// Loss scalars that know their JSON shape: integers stay integers.
pub trait JsonLoss: LossValue {
    fn to_json(self) -> Value;
}

impl JsonLoss for i64 {
    fn to_json(self) -> Value {
        json!(self)
    }
}

impl JsonLoss for f64 {
    fn to_json(self) -> Value {
        json!(self)
    }
}

pub fn score_json(x: Score) -> Value {
    let v = x.get();
    if v == f64::NEG_INFINITY {
        json!("-inf")
    } else if v == f64::INFINITY {
        json!("inf")
    } else {
        json!(v)
    }
}

pub fn fit_record<Z: JsonLoss>(fit: &RectFit<Z>, config: &FitConfig, n: usize) -> Value {
    json!({
        "n": n,
        "q0": config.q0(),
        "q1": config.q1(),
        "empty": fit.is_empty(),
        "x1": score_json(fit.x1),
        "x2": score_json(fit.x2),
        "l0": fit.l0.to_json(),
        "l1": fit.l1.to_json(),
        "l2": fit.l2.to_json(),
        "k": fit.k,
        "m": fit.m,
        "loss": fit.evaluate_loss(config),
    })
}
