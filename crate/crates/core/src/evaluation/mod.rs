//! Pixel-level scoring of skin masks and comparison runs.

mod baseline;
mod compare;
mod dataset;
mod report;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::imaging::BinaryMask;

pub use baseline::{classify_baseline, sobottka_accepts, wang_yuan_accepts, BaselineId};
pub use compare::{run_comparison, ComparisonReport, EvalReport, ImageEval, ImageIssue, Variant};
pub use compare::EffectiveConfig;
pub use dataset::{evaluate_dirs, DatasetError, load_dataset, match_by_stem, DatasetLoad, Sample};
pub use report::{comparison_csv, comparison_table, CSV_HEADER};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("mask dimensions differ: prediction {0:?}, truth {1:?}")]
    DimensionMismatch((usize, usize), (usize, usize)),
    #[error("confusion matrix is empty")]
    EmptyConfusion,
}

/// Pixel tallies of a prediction against ground truth.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl Confusion {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

impl std::ops::Add for Confusion {
    type Output = Confusion;

    fn add(self, o: Confusion) -> Confusion {
        Confusion {
            tp: self.tp + o.tp,
            fp: self.fp + o.fp,
            tn: self.tn + o.tn,
            fn_: self.fn_ + o.fn_,
        }
    }
}

impl std::iter::Sum for Confusion {
    fn sum<I: Iterator<Item = Confusion>>(iter: I) -> Confusion {
        iter.fold(Confusion::default(), |a, b| a + b)
    }
}

pub fn confusion(pred: &BinaryMask, truth: &BinaryMask) -> Result<Confusion, EvalError> {
    if pred.dims() != truth.dims() {
        return Err(EvalError::DimensionMismatch(pred.dims(), truth.dims()));
    }
    let mut c = Confusion::default();
    for (&p, &t) in pred.as_slice().iter().zip(truth.as_slice()) {
        match (p, t) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    Ok(c)
}

/// Derived rates. Ratios with a zero denominator are reported as 0 and named in `undefined`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    /// Also the true positive rate.
    pub recall: f64,
    pub f_score: f64,
    pub false_positive_rate: f64,
    pub false_negative_rate: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undefined: Vec<String>,
}

pub fn metrics(c: &Confusion) -> Result<Metrics, EvalError> {
    let total = c.total();
    if total == 0 {
        return Err(EvalError::EmptyConfusion);
    }
    let mut undefined = Vec::new();
    let mut ratio = |name: &str, num: u64, den: u64| {
        if den == 0 {
            undefined.push(name.to_string());
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let precision = ratio("precision", c.tp, c.tp + c.fp);
    let recall = ratio("recall", c.tp, c.tp + c.fn_);
    let false_positive_rate = ratio("false_positive_rate", c.fp, c.fp + c.tn);
    let false_negative_rate = ratio("false_negative_rate", c.fn_, c.fn_ + c.tp);
    let f_score = if precision + recall > 0.0 {
        f_score(precision, recall)
    } else {
        undefined.push("f_score".to_string());
        0.0
    };
    Ok(Metrics {
        accuracy: (c.tp + c.tn) as f64 / total as f64,
        precision,
        recall,
        f_score,
        false_positive_rate,
        false_negative_rate,
        undefined,
    })
}

/// Harmonic mean of precision and recall.
pub fn f_score(precision: f64, recall: f64) -> f64 {
    2.0 * precision * recall / (precision + recall)
}
