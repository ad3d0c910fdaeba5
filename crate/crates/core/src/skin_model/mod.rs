//! Person-specific skin models fitted from a face sample.
//!
//! Two classifiers are fitted on the same sample: a smoothed 2D histogram
//! accepting pixels whose cell density exceeds a fixed count, and an
//! elliptical Gaussian fitted to the sample pixels that pass the histogram.
//! Their binary outputs are fused by a per-pixel product (logical AND).
//! Whenever no usable face sample exists the detector returns an all-background
//! mask.

mod gaussian;
mod histogram;
mod smoother;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colorspace::{select_pair, FeaturePairId, FeaturePlane};
use crate::face_region::{extract_face_samples, EyePair, FaceError, FaceSample, PreprocessConfig};
use crate::imaging::{BinaryMask, RgbImage};

pub use gaussian::{fit_gaussian, BoundaryOptions, GaussianModel};
pub use histogram::{bin_index, build_histogram, smooth_histogram, Hist2D};
pub use smoother::{smooth_grid, Whittaker};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("degenerate skin model: {0}")]
    Degenerate(String),
    #[error("histogram must be smoothed before classification")]
    NotSmoothed,
    #[error("mask dimensions differ: {0:?} vs {1:?}")]
    DimensionMismatch((usize, usize), (usize, usize)),
    #[error("invalid detector parameter: {0}")]
    InvalidParams(String),
}

/// Why a detection fell back to the blank mask.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DetectError {
    #[error("no face input")]
    NoFace,
    #[error(transparent)]
    Face(#[from] FaceError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which classifier output to report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FusionMode {
    #[default]
    Fusion,
    HistOnly,
    GmmOnly,
}

impl FusionMode {
    pub const ALL: [FusionMode; 3] = [FusionMode::Fusion, FusionMode::HistOnly, FusionMode::GmmOnly];

    pub fn token(self) -> &'static str {
        match self {
            FusionMode::Fusion => "fusion",
            FusionMode::HistOnly => "hist_only",
            FusionMode::GmmOnly => "gmm_only",
        }
    }
}

impl fmt::Display for FusionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for FusionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fusion" => Ok(FusionMode::Fusion),
            "hist" | "hist_only" | "s2d" => Ok(FusionMode::HistOnly),
            "gmm" | "gmm_only" | "gauss" => Ok(FusionMode::GmmOnly),
            other => Err(format!("unknown mode '{other}' (expected fusion, hist, gmm)")),
        }
    }
}

/// Model parameters independent of the face geometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorParams {
    pub bins_a: usize,
    pub bins_b: usize,
    pub lambda: f64,
    pub hist_threshold: f64,
    pub boundary_scale: f64,
    pub literal_variance_axes: bool,
    pub exact_ellipse: bool,
}

impl Default for DetectorParams {
    fn default() -> Self {
        Self {
            bins_a: 64,
            bins_b: 64,
            lambda: 10.0,
            hist_threshold: 20.0,
            boundary_scale: 2.0,
            literal_variance_axes: false,
            exact_ellipse: false,
        }
    }
}

impl DetectorParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: String| Err(ModelError::InvalidParams(m));
        if self.bins_a == 0 || self.bins_b == 0 {
            return bad(format!("bin counts must be positive ({}, {})", self.bins_a, self.bins_b));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda must be >= 0, got {}", self.lambda));
        }
        if !(self.hist_threshold > 0.0 && self.hist_threshold.is_finite()) {
            return bad(format!("hist_threshold must be > 0, got {}", self.hist_threshold));
        }
        if !(self.boundary_scale > 0.0 && self.boundary_scale.is_finite()) {
            return bad(format!("boundary_scale must be > 0, got {}", self.boundary_scale));
        }
        Ok(())
    }

    pub fn boundary_options(&self) -> BoundaryOptions {
        BoundaryOptions {
            boundary_scale: self.boundary_scale,
            literal_variance_axes: self.literal_variance_axes,
            exact_ellipse: self.exact_ellipse,
        }
    }
}

/// A fitted, immutable per-image skin detector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkinDetector {
    pub pair: FeaturePairId,
    pub hist: Hist2D,
    pub gauss: GaussianModel,
    pub hist_threshold: f64,
}

impl SkinDetector {
    pub fn new(pair: FeaturePairId, hist: Hist2D, gauss: GaussianModel, hist_threshold: f64) -> Result<Self, ModelError> {
        if !hist.smoothed {
            return Err(ModelError::NotSmoothed);
        }
        if !(hist_threshold > 0.0 && hist_threshold.is_finite()) {
            return Err(ModelError::InvalidParams(format!("hist_threshold must be > 0, got {hist_threshold}")));
        }
        Ok(Self {
            pair,
            hist,
            gauss,
            hist_threshold,
        })
    }

    /// Fit both models from the face sample(s) of `img`.
    pub fn fit(
        img: &RgbImage,
        faces: &[EyePair],
        pair: FeaturePairId,
        cfg: &PreprocessConfig,
        params: &DetectorParams,
    ) -> Result<(Self, FeaturePlane), DetectError> {
        params.validate()?;
        if faces.is_empty() {
            return Err(DetectError::NoFace);
        }
        let sample = extract_face_samples(img, faces, cfg)?;
        let features = select_pair(img, pair);
        let detector = Self::fit_sample(&sample, &features, params)?;
        Ok((detector, features))
    }

    pub fn fit_sample(sample: &FaceSample, features: &FeaturePlane, params: &DetectorParams) -> Result<Self, ModelError> {
        params.validate()?;
        let raw = build_histogram(sample, features, (params.bins_a, params.bins_b));
        let hist = smooth_histogram(&raw, params.lambda);
        let gauss = fit_gaussian(sample, features, &hist, params.hist_threshold, params.boundary_options())?;
        Self::new(features.pair, hist, gauss, params.hist_threshold)
    }

    pub fn hist_accepts(&self, a: f64, b: f64) -> bool {
        self.hist.value_at(a, b).is_some_and(|z| z > self.hist_threshold)
    }

    pub fn classify(&self, features: &FeaturePlane, mode: FusionMode) -> BinaryMask {
        match mode {
            FusionMode::Fusion => per_pixel(features, |a, b| self.hist_accepts(a, b) && self.gauss.accepts(a, b)),
            FusionMode::HistOnly => classify_hist(self, features),
            FusionMode::GmmOnly => classify_gauss(self, features),
        }
    }
}

fn per_pixel(features: &FeaturePlane, f: impl Fn(f64, f64) -> bool) -> BinaryMask {
    let data = features.a.iter().zip(&features.b).map(|(&a, &b)| f(a, b)).collect();
    BinaryMask::from_raw(features.width, features.height, data).expect("feature plane dimensions are consistent")
}

/// Pixels whose smoothed-histogram cell exceeds the threshold.
pub fn classify_hist(detector: &SkinDetector, features: &FeaturePlane) -> BinaryMask {
    per_pixel(features, |a, b| detector.hist_accepts(a, b))
}

/// Pixels inside the Gaussian's elliptical boundary.
pub fn classify_gauss(detector: &SkinDetector, features: &FeaturePlane) -> BinaryMask {
    per_pixel(features, |a, b| detector.gauss.accepts(a, b))
}

/// Product rule on binary decisions.
pub fn fuse(h: &BinaryMask, g: &BinaryMask) -> Result<BinaryMask, ModelError> {
    h.zip_with(g, |x, y| x && y)
        .ok_or(ModelError::DimensionMismatch(h.dims(), g.dims()))
}

/// Full pipeline; `Err` carries the reason the caller should fall back to a blank mask.
pub fn try_detect(
    img: &RgbImage,
    faces: &[EyePair],
    pair: FeaturePairId,
    mode: FusionMode,
    cfg: &PreprocessConfig,
    params: &DetectorParams,
) -> Result<BinaryMask, DetectError> {
    let (detector, features) = SkinDetector::fit(img, faces, pair, cfg, params)?;
    Ok(detector.classify(&features, mode))
}

/// Detect skin with the given classifier mode, returning the blank mask and the
/// fallback reason when no person-specific model can be built.
pub fn detect_with_reason(
    img: &RgbImage,
    faces: &[EyePair],
    pair: FeaturePairId,
    mode: FusionMode,
    cfg: &PreprocessConfig,
    params: &DetectorParams,
) -> (BinaryMask, Option<DetectError>) {
    match try_detect(img, faces, pair, mode, cfg, params) {
        Ok(mask) => (mask, None),
        Err(e) => (BinaryMask::new(img.width(), img.height()), Some(e)),
    }
}

/// Fused skin mask for `img`; all background when there are no eyes or the fit degenerates.
pub fn detect(
    img: &RgbImage,
    faces: &[EyePair],
    pair: FeaturePairId,
    cfg: &PreprocessConfig,
    params: &DetectorParams,
) -> BinaryMask {
    detect_with_reason(img, faces, pair, FusionMode::Fusion, cfg, params).0
}
