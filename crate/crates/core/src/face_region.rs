//! Face skin sample extraction from eye coordinates.
//!
//! An ellipse is placed at the midpoint of the two eyes, with its axes sized
//! relative to the inter-eye distance and (optionally) aligned with the eye
//! line. Textured pixels are removed by thresholding the Sobel magnitude of
//! the luma and dilating the resulting edge map; what remains is the smooth
//! face sample used to fit the skin models.
//!
//! Pixel `(x, y)` is the unit square `[x, x+1) x [y, y+1)` and is tested at its
//! center `(x + 0.5, y + 0.5)`. Eye coordinates are continuous image coordinates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::imaging::{dilate, rgb_to_luma, sobel_magnitude, BinaryMask, RgbImage};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FaceError {
    #[error("invalid eye annotation: {0}")]
    InvalidAnnotation(String),
    #[error("face sample is empty after edge removal")]
    EmptySample,
}

/// Left/right eye positions in image coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EyePair {
    pub left: (f64, f64),
    pub right: (f64, f64),
}

impl EyePair {
    pub fn new(left: (f64, f64), right: (f64, f64)) -> Result<Self, FaceError> {
        let pair = Self { left, right };
        pair.check_shape()?;
        Ok(pair)
    }

    fn check_shape(&self) -> Result<(), FaceError> {
        let finite = [self.left.0, self.left.1, self.right.0, self.right.1]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(FaceError::InvalidAnnotation("eye coordinates must be finite".into()));
        }
        if self.distance() <= 0.0 {
            return Err(FaceError::InvalidAnnotation(format!(
                "left and right eye coincide at ({}, {})",
                self.left.0, self.left.1
            )));
        }
        Ok(())
    }

    /// Check shape and that both eyes lie inside a `width x height` image.
    pub fn validate(&self, (width, height): (usize, usize)) -> Result<(), FaceError> {
        self.check_shape()?;
        for (name, (x, y)) in [("left", self.left), ("right", self.right)] {
            if x < 0.0 || y < 0.0 || x >= width as f64 || y >= height as f64 {
                return Err(FaceError::InvalidAnnotation(format!(
                    "{name} eye ({x}, {y}) outside {width}x{height} image"
                )));
            }
        }
        Ok(())
    }

    pub fn distance(&self) -> f64 {
        let (dx, dy) = (self.right.0 - self.left.0, self.right.1 - self.left.1);
        (dx * dx + dy * dy).sqrt()
    }

    pub fn midpoint(&self) -> (f64, f64) {
        ((self.left.0 + self.right.0) / 2.0, (self.left.1 + self.right.1) / 2.0)
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self {
            left: (self.left.0 + dx, self.left.1 + dy),
            right: (self.right.0 + dx, self.right.1 + dy),
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            left: self.right,
            right: self.left,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessConfig {
    /// Horizontal (eye-line) axis as a multiple of the inter-eye distance.
    pub minor_axis_factor: f64,
    /// Vertical axis as a multiple of the inter-eye distance.
    pub major_axis_factor: f64,
    /// Treat the factors as full axis lengths rather than semi-axes.
    pub axes_are_full_lengths: bool,
    /// Sobel magnitude (1/8 scaled) above which a pixel is an edge.
    pub edge_threshold: u8,
    pub dilate_radius: usize,
    pub dilate_iterations: usize,
    pub rotate_with_eye_line: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            minor_axis_factor: 1.6,
            major_axis_factor: 1.8,
            axes_are_full_lengths: true,
            edge_threshold: 96,
            dilate_radius: 1,
            dilate_iterations: 2,
            rotate_with_eye_line: true,
        }
    }
}

impl PreprocessConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.minor_axis_factor > 0.0 && self.minor_axis_factor.is_finite()) {
            return Err(format!("minor_axis_factor must be > 0, got {}", self.minor_axis_factor));
        }
        if !(self.major_axis_factor > 0.0 && self.major_axis_factor.is_finite()) {
            return Err(format!("major_axis_factor must be > 0, got {}", self.major_axis_factor));
        }
        if self.dilate_radius == 0 {
            return Err("dilate_radius must be >= 1".into());
        }
        Ok(())
    }

    /// Horizontal and vertical semi-axes for an inter-eye distance `d`.
    pub fn semi_axes(&self, d: f64) -> (f64, f64) {
        let k = if self.axes_are_full_lengths { 0.5 } else { 1.0 };
        (k * self.minor_axis_factor * d, k * self.major_axis_factor * d)
    }
}

/// Smooth face pixels for one image.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceSample {
    pub mask: BinaryMask,
    /// True cells of `mask`, row-major.
    pub pixels: Vec<(usize, usize)>,
    pub source_dims: (usize, usize),
}

impl FaceSample {
    fn from_mask(mask: BinaryMask) -> Result<Self, FaceError> {
        let pixels = mask.true_coords();
        if pixels.is_empty() {
            return Err(FaceError::EmptySample);
        }
        Ok(Self {
            source_dims: mask.dims(),
            mask,
            pixels,
        })
    }
}

fn ellipse_into(mask: &mut BinaryMask, eyes: &EyePair, cfg: &PreprocessConfig) {
    let (cx, cy) = eyes.midpoint();
    let d = eyes.distance();
    let (ax, ay) = cfg.semi_axes(d);
    // Unit vector along the eye line; swapping eyes negates it exactly.
    let (ux, uy) = if cfg.rotate_with_eye_line {
        ((eyes.right.0 - eyes.left.0) / d, (eyes.right.1 - eyes.left.1) / d)
    } else {
        (1.0, 0.0)
    };
    let (w, h) = mask.dims();
    let reach = ax.max(ay) + 1.0;
    let x0 = ((cx - reach).floor().max(0.0)) as usize;
    let y0 = ((cy - reach).floor().max(0.0)) as usize;
    let x1 = ((cx + reach).ceil().max(0.0) as usize).min(w);
    let y1 = ((cy + reach).ceil().max(0.0) as usize).min(h);
    for y in y0..y1 {
        for x in x0..x1 {
            let px = x as f64 + 0.5 - cx;
            let py = y as f64 + 0.5 - cy;
            let along = ux * px + uy * py;
            let across = -uy * px + ux * py;
            let q = (along / ax).powi(2) + (across / ay).powi(2);
            if q <= 1.0 {
                mask.set(x, y, true);
            }
        }
    }
}

/// Mask of pixels whose centers lie inside the eye-anchored face ellipse.
pub fn elliptical_mask(
    dims: (usize, usize),
    eyes: &EyePair,
    cfg: &PreprocessConfig,
) -> Result<BinaryMask, FaceError> {
    eyes.validate(dims)?;
    let mut mask = BinaryMask::new(dims.0, dims.1);
    ellipse_into(&mut mask, eyes, cfg);
    Ok(mask)
}

/// Edge map after thresholding and dilation.
pub fn non_smooth_mask(img: &RgbImage, cfg: &PreprocessConfig) -> BinaryMask {
    let edges = sobel_magnitude(&rgb_to_luma(img)).threshold_above(cfg.edge_threshold);
    dilate(&edges, cfg.dilate_radius, cfg.dilate_iterations)
}

pub fn extract_face_sample(
    img: &RgbImage,
    eyes: &EyePair,
    cfg: &PreprocessConfig,
) -> Result<FaceSample, FaceError> {
    extract_face_samples(img, std::slice::from_ref(eyes), cfg)
}

/// Pooled face sample over several faces (union of the per-face samples).
pub fn extract_face_samples(
    img: &RgbImage,
    faces: &[EyePair],
    cfg: &PreprocessConfig,
) -> Result<FaceSample, FaceError> {
    if faces.is_empty() {
        return Err(FaceError::InvalidAnnotation("no eye pairs supplied".into()));
    }
    cfg.validate().map_err(FaceError::InvalidAnnotation)?;
    let dims = img.dims();
    let mut region = BinaryMask::new(dims.0, dims.1);
    for eyes in faces {
        eyes.validate(dims)?;
        ellipse_into(&mut region, eyes, cfg);
    }
    let rough = non_smooth_mask(img, cfg);
    let mask = region
        .zip_with(&rough, |inside, edge| inside && !edge)
        .expect("edge map shares image dimensions");
    FaceSample::from_mask(mask)
}

/// One record of an eye annotations file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EyeAnnotation {
    pub image: String,
    pub left_eye: [f64; 2],
    pub right_eye: [f64; 2],
}

/// Faces per image, keyed by the image's file name. Several records for the
/// same image describe several faces.
pub type Annotations = std::collections::BTreeMap<String, Vec<EyePair>>;

/// Key under which an annotation's image path is filed: its last path component.
pub fn annotation_key(image: &str) -> String {
    image
        .rsplit(['/', '\\'])
        .next()
        .unwrap_or(image)
        .to_string()
}

/// Parse a JSON annotations array. Records with coincident eyes are rejected.
pub fn parse_annotations(json: &str) -> Result<Annotations, FaceError> {
    let records: Vec<EyeAnnotation> = serde_json::from_str(json)
        .map_err(|e| FaceError::InvalidAnnotation(format!("malformed annotations: {e}")))?;
    let mut out = Annotations::new();
    for rec in records {
        let pair = EyePair::new(
            (rec.left_eye[0], rec.left_eye[1]),
            (rec.right_eye[0], rec.right_eye[1]),
        )
        .map_err(|e| FaceError::InvalidAnnotation(format!("{}: {e}", rec.image)))?;
        out.entry(annotation_key(&rec.image)).or_default().push(pair);
    }
    Ok(out)
}
