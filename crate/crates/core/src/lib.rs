//! Dynamic, face-anchored human skin detection.
//!
//! A skin model is fitted per image from a smooth face sample located by eye
//! coordinates. A smoothed 2D color histogram and an elliptical Gaussian are
//! fitted on a two-channel feature space (log-opponent `(I, B_y)` by default)
//! and combined with a product rule. The [`evaluation`] module scores masks
//! against ground truth and runs feature/mode/baseline comparisons.

pub mod cli;
pub mod colorspace;
pub mod evaluation;
pub mod face_region;
pub mod imaging;
pub mod skin_model;
pub mod synth;

pub use colorspace::{select_pair, FeaturePairId, FeaturePlane};
pub use face_region::{EyePair, FaceSample, PreprocessConfig};
pub use imaging::{BinaryMask, GrayImage, RgbImage};
pub use skin_model::{detect, DetectorParams, FusionMode, SkinDetector};
