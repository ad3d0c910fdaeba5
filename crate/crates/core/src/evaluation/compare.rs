use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colorspace::FeaturePairId;
use crate::face_region::PreprocessConfig;
use crate::imaging::BinaryMask;
use crate::skin_model::{detect_with_reason, DetectorParams, FusionMode};

use super::baseline::{classify_baseline, BaselineId};
use super::dataset::Sample;
use super::{confusion, metrics, Confusion, Metrics};

/// One row of a comparison run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Fused detector on the given feature pair.
    Feature(FeaturePairId),
    /// Log-opponent detector reporting one classifier output.
    Mode(FusionMode),
    Baseline(BaselineId),
}

impl Variant {
    pub fn label(&self) -> String {
        match self {
            Variant::Feature(p) => p.token().into(),
            Variant::Mode(m) => m.token().into(),
            Variant::Baseline(b) => b.token().into(),
        }
    }

    fn predict(&self, sample: &Sample, cfg: &PreprocessConfig, params: &DetectorParams) -> (BinaryMask, Option<String>) {
        let (pair, mode) = match *self {
            Variant::Baseline(id) => return (classify_baseline(&sample.image, id), None),
            Variant::Feature(p) => (p, FusionMode::Fusion),
            Variant::Mode(m) => (FeaturePairId::IBy, m),
        };
        let (mask, why) = detect_with_reason(&sample.image, &sample.faces, pair, mode, cfg, params);
        (mask, why.map(|e| e.to_string()))
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Variant {
    type Err = String;

    /// Accepts a feature pair, mode or baseline token.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(p) = s.parse::<FeaturePairId>() {
            return Ok(Variant::Feature(p));
        }
        if let Ok(m) = s.parse::<FusionMode>() {
            return Ok(Variant::Mode(m));
        }
        if let Ok(b) = s.parse::<BaselineId>() {
            return Ok(Variant::Baseline(b));
        }
        Err(format!("unknown variant '{s}'"))
    }
}

/// An image that could not be evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageIssue {
    pub id: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageEval {
    pub id: String,
    pub confusion: Confusion,
    pub metrics: Metrics,
    /// Set when the detector returned the blank mask, with the reason.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<String>,
}

/// Per-image rows plus pixel-pooled totals for one variant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub variant: String,
    pub per_image: Vec<ImageEval>,
    pub aggregate: Confusion,
    /// `None` only when no image was evaluated.
    pub metrics: Option<Metrics>,
}

impl EvalReport {
    pub fn from_rows(variant: String, per_image: Vec<ImageEval>) -> Self {
        let aggregate: Confusion = per_image.iter().map(|r| r.confusion).sum();
        let metrics = metrics(&aggregate).ok();
        Self {
            variant,
            per_image,
            aggregate,
            metrics,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EffectiveConfig {
    #[serde(flatten)]
    pub preprocess: PreprocessConfig,
    #[serde(flatten)]
    pub detector: DetectorParams,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub dataset: String,
    pub config: EffectiveConfig,
    pub images: usize,
    pub skipped: usize,
    pub issues: Vec<ImageIssue>,
    pub variants: Vec<EvalReport>,
}

/// Evaluate each variant over `samples` in the order given. Per-image work
/// runs on the current rayon pool; row order is deterministic.
pub fn run_comparison(
    dataset: &str,
    samples: &[Sample],
    load_issues: &[ImageIssue],
    variants: &[Variant],
    cfg: &PreprocessConfig,
    params: &DetectorParams,
) -> ComparisonReport {
    let mut issues = load_issues.to_vec();
    let mut reports = Vec::with_capacity(variants.len());
    for variant in variants {
        let scored: Vec<Result<ImageEval, ImageIssue>> = samples
            .par_iter()
            .map(|s| {
                let (pred, fallback) = variant.predict(s, cfg, params);
                let c = confusion(&pred, &s.truth).map_err(|e| ImageIssue {
                    id: s.id.clone(),
                    message: e.to_string(),
                })?;
                let m = metrics(&c).map_err(|e| ImageIssue {
                    id: s.id.clone(),
                    message: e.to_string(),
                })?;
                Ok(ImageEval {
                    id: s.id.clone(),
                    confusion: c,
                    metrics: m,
                    fallback,
                })
            })
            .collect();
        let mut rows = Vec::new();
        for r in scored {
            match r {
                Ok(row) => rows.push(row),
                Err(issue) if !issues.contains(&issue) => issues.push(issue),
                Err(_) => {}
            }
        }
        reports.push(EvalReport::from_rows(variant.label(), rows));
    }
    let skipped = {
        let mut ids: Vec<&str> = issues.iter().map(|i| i.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    };
    ComparisonReport {
        dataset: dataset.to_string(),
        config: EffectiveConfig {
            preprocess: cfg.clone(),
            detector: params.clone(),
        },
        images: samples.len(),
        skipped,
        issues,
        variants: reports,
    }
}
