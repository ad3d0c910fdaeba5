//! Pixel containers, PNG I/O, Sobel gradient magnitude and binary dilation.

use std::path::Path;

use image::{ColorType, ImageReader};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImagingError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to decode {path}: {message}")]
    Decode { path: String, message: String },
    #[error("unsupported PNG color type {color:?} in {path} (only 8-bit gray, gray+alpha, RGB, RGBA are accepted)")]
    UnsupportedBitDepth { path: String, color: ColorType },
    #[error("failed to encode {path}: {message}")]
    Encode { path: String, message: String },
    #[error("buffer of length {len} does not match {width}x{height}x{channels}")]
    BadBuffer {
        width: usize,
        height: usize,
        channels: usize,
        len: usize,
    },
    #[error("image dimensions must be at least 1x1, got {width}x{height}")]
    Empty { width: usize, height: usize },
}

fn check_dims(width: usize, height: usize, channels: usize, len: usize) -> Result<(), ImagingError> {
    if width == 0 || height == 0 {
        return Err(ImagingError::Empty { width, height });
    }
    if width * height * channels != len {
        return Err(ImagingError::BadBuffer {
            width,
            height,
            channels,
            len,
        });
    }
    Ok(())
}

/// 8-bit RGB image, row-major interleaved `R, G, B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Result<Self, ImagingError> {
        check_dims(width, height, 3, data.len())?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Image filled with a single color.
    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let data = rgb.iter().copied().cycle().take(width * height * 3).collect();
        Self {
            width,
            height,
            data,
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [u8; 3]) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn put(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    /// Pixels in row-major order.
    pub fn pixels(&self) -> impl Iterator<Item = [u8; 3]> + '_ {
        self.data.chunks_exact(3).map(|p| [p[0], p[1], p[2]])
    }
}

/// 8-bit single-channel image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Result<Self, ImagingError> {
        check_dims(width, height, 1, data.len())?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    /// Pixels strictly above `threshold`.
    pub fn threshold_above(&self, threshold: u8) -> BinaryMask {
        BinaryMask {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| v > threshold).collect(),
        }
    }
}

/// Row-major boolean mask; `true` marks foreground.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self::filled(width, height, false)
    }

    pub fn filled(width: usize, height: usize, value: bool) -> Self {
        assert!(width > 0 && height > 0, "mask dimensions must be positive");
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_raw(width: usize, height: usize, data: Vec<bool>) -> Result<Self, ImagingError> {
        check_dims(width, height, 1, data.len())?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(width > 0 && height > 0, "mask dimensions must be positive");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.data[y * self.width + x] = value;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    pub fn is_blank(&self) -> bool {
        !self.data.iter().any(|&v| v)
    }

    /// Coordinates of foreground cells in row-major order.
    pub fn true_coords(&self) -> Vec<(usize, usize)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(|(i, _)| (i % self.width, i / self.width))
            .collect()
    }

    pub fn not(&self) -> BinaryMask {
        BinaryMask {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| !v).collect(),
        }
    }

    /// Cellwise combination of two masks of equal size. Returns `None` on a size mismatch.
    pub fn zip_with(&self, other: &BinaryMask, f: impl Fn(bool, bool) -> bool) -> Option<BinaryMask> {
        if self.dims() != other.dims() {
            return None;
        }
        Some(BinaryMask {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.dims() == other.dims() && self.data.iter().zip(&other.data).all(|(&a, &b)| !a || b)
    }
}

/// Decode a PNG into 8-bit RGB. Gray and paletted images are expanded, alpha is dropped,
/// and 16-bit images are rejected.
pub fn load_png(path: impl AsRef<Path>) -> Result<RgbImage, ImagingError> {
    let path = path.as_ref();
    let img = decode(path)?;
    let color = img.color();
    match color {
        ColorType::L8 | ColorType::La8 | ColorType::Rgb8 | ColorType::Rgba8 => {}
        _ => {
            return Err(ImagingError::UnsupportedBitDepth {
                path: path.display().to_string(),
                color,
            })
        }
    }
    let rgb = img.to_rgb8();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    RgbImage::from_raw(w, h, rgb.into_raw())
}

/// Decode a ground-truth PNG; any pixel whose gray value exceeds 127 is foreground.
pub fn load_mask_png(path: impl AsRef<Path>) -> Result<BinaryMask, ImagingError> {
    let path = path.as_ref();
    let img = decode(path)?;
    let color = img.color();
    match color {
        ColorType::L8 | ColorType::La8 | ColorType::Rgb8 | ColorType::Rgba8 => {}
        _ => {
            return Err(ImagingError::UnsupportedBitDepth {
                path: path.display().to_string(),
                color,
            })
        }
    }
    let gray = img.to_luma8();
    let (w, h) = (gray.width() as usize, gray.height() as usize);
    BinaryMask::from_raw(w, h, gray.into_raw().into_iter().map(|v| v > 127).collect())
}

fn decode(path: &Path) -> Result<image::DynamicImage, ImagingError> {
    let reader = ImageReader::open(path).map_err(|source| ImagingError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader = reader.with_guessed_format().map_err(|source| ImagingError::Io {
        path: path.display().to_string(),
        source,
    })?;
    reader.decode().map_err(|e| ImagingError::Decode {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Encode a mask as single-channel 8-bit PNG bytes (foreground 255, background 0).
pub fn encode_mask_png(mask: &BinaryMask) -> Result<Vec<u8>, ImagingError> {
    let raw: Vec<u8> = mask.data.iter().map(|&v| if v { 255 } else { 0 }).collect();
    encode_png(&raw, mask.width, mask.height, image::ExtendedColorType::L8)
}

pub fn encode_rgb_png(img: &RgbImage) -> Result<Vec<u8>, ImagingError> {
    encode_png(&img.data, img.width, img.height, image::ExtendedColorType::Rgb8)
}

fn encode_png(
    raw: &[u8],
    width: usize,
    height: usize,
    color: image::ExtendedColorType,
) -> Result<Vec<u8>, ImagingError> {
    use image::ImageEncoder;
    let mut out = Vec::new();
    image::codecs::png::PngEncoder::new(&mut out)
        .write_image(raw, width as u32, height as u32, color)
        .map_err(|e| ImagingError::Encode {
            path: "<memory>".into(),
            message: e.to_string(),
        })?;
    Ok(out)
}

pub fn save_mask_png(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<(), ImagingError> {
    let path = path.as_ref();
    let bytes = encode_mask_png(mask)?;
    std::fs::write(path, bytes).map_err(|source| ImagingError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn save_rgb_png(img: &RgbImage, path: impl AsRef<Path>) -> Result<(), ImagingError> {
    let path = path.as_ref();
    let bytes = encode_rgb_png(img)?;
    std::fs::write(path, bytes).map_err(|source| ImagingError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// BT.601 luma, rounded to the nearest integer.
pub fn rgb_to_luma(img: &RgbImage) -> GrayImage {
    let data = img
        .pixels()
        .map(|[r, g, b]| {
            let y = 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64;
            y.round().clamp(0.0, 255.0) as u8
        })
        .collect();
    GrayImage {
        width: img.width,
        height: img.height,
        data,
    }
}

/// 3x3 Sobel gradient magnitude, scaled by 1/8, rounded and clamped to 8 bits.
///
/// Borders replicate the nearest edge pixel. Images narrower or shorter than
/// 3 pixels yield an all-zero result.
pub fn sobel_magnitude(img: &GrayImage) -> GrayImage {
    let (w, h) = (img.width, img.height);
    let mut out = vec![0u8; w * h];
    if w < 3 || h < 3 {
        return GrayImage {
            width: w,
            height: h,
            data: out,
        };
    }
    let at = |x: isize, y: isize| -> i32 {
        let xc = x.clamp(0, w as isize - 1) as usize;
        let yc = y.clamp(0, h as isize - 1) as usize;
        img.data[yc * w + xc] as i32
    };
    for y in 0..h as isize {
        for x in 0..w as isize {
            let gx = (at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2 * at(x - 1, y) + at(x - 1, y + 1));
            let gy = (at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2 * at(x, y - 1) + at(x + 1, y - 1));
            let mag = ((gx * gx + gy * gy) as f64).sqrt() / 8.0;
            out[y as usize * w + x as usize] = mag.round().min(255.0) as u8;
        }
    }
    GrayImage {
        width: w,
        height: h,
        data: out,
    }
}

/// Binary dilation by a `(2*radius+1)^2` square, repeated `iterations` times.
/// Pixels outside the image count as background.
pub fn dilate(mask: &BinaryMask, radius: usize, iterations: usize) -> BinaryMask {
    let (w, h) = mask.dims();
    let mut cur = mask.data.clone();
    let mut tmp = vec![false; w * h];
    for _ in 0..iterations {
        // The square element is separable: horizontal pass, then vertical.
        for y in 0..h {
            let row = &cur[y * w..(y + 1) * w];
            for x in 0..w {
                let lo = x.saturating_sub(radius);
                let hi = (x + radius).min(w - 1);
                tmp[y * w + x] = row[lo..=hi].iter().any(|&v| v);
            }
        }
        for x in 0..w {
            for y in 0..h {
                let lo = y.saturating_sub(radius);
                let hi = (y + radius).min(h - 1);
                cur[y * w + x] = (lo..=hi).any(|yy| tmp[yy * w + x]);
            }
        }
    }
    BinaryMask {
        width: w,
        height: h,
        data: cur,
    }
}
