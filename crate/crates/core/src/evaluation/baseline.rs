//! Fixed-range skin classifiers used as static baselines.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::colorspace::{hsv_pixel, Interval};
use crate::imaging::{BinaryMask, RgbImage};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineId {
    /// Hue and saturation ranges.
    SobottkaHs,
    /// Normalized r/g plus HSV ranges.
    WangYuan,
}

impl BaselineId {
    pub const ALL: [BaselineId; 2] = [BaselineId::SobottkaHs, BaselineId::WangYuan];

    pub fn token(self) -> &'static str {
        match self {
            BaselineId::SobottkaHs => "sobottka_hs",
            BaselineId::WangYuan => "wang_yuan",
        }
    }
}

impl fmt::Display for BaselineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for BaselineId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        BaselineId::ALL
            .into_iter()
            .find(|b| b.token() == lower)
            .ok_or_else(|| format!("unknown baseline '{s}' (expected sobottka_hs or wang_yuan)"))
    }
}

const SOBOTTKA_H: Interval = Interval::new(0.0, 50.0);
const SOBOTTKA_S: Interval = Interval::new(0.23, 0.68);

const WANG_R: Interval = Interval::new(0.36, 0.465);
const WANG_G: Interval = Interval::new(0.28, 0.363);
const WANG_H: Interval = Interval::new(0.0, 50.0);
const WANG_S: Interval = Interval::new(0.20, 0.68);
const WANG_V: Interval = Interval::new(0.35, 1.0);

/// Hue in degrees, saturation in `[0, 1]`.
pub fn sobottka_accepts(h: f64, s: f64) -> bool {
    SOBOTTKA_H.contains(h) && SOBOTTKA_S.contains(s)
}

/// Normalized chromaticities `r = R/(R+G+B)`, `g = G/(R+G+B)` plus HSV.
pub fn wang_yuan_accepts(r: f64, g: f64, h: f64, s: f64, v: f64) -> bool {
    WANG_R.contains(r) && WANG_G.contains(g) && WANG_H.contains(h) && WANG_S.contains(s) && WANG_V.contains(v)
}

fn pixel_accepts(id: BaselineId, p: [u8; 3]) -> bool {
    let (h, s, v) = hsv_pixel(p);
    match id {
        BaselineId::SobottkaHs => sobottka_accepts(h, s),
        BaselineId::WangYuan => {
            let sum = p[0] as u32 + p[1] as u32 + p[2] as u32;
            if sum == 0 {
                return false;
            }
            let (r, g) = (p[0] as f64 / sum as f64, p[1] as f64 / sum as f64);
            wang_yuan_accepts(r, g, h, s, v)
        }
    }
}

pub fn classify_baseline(img: &RgbImage, id: BaselineId) -> BinaryMask {
    let data = img.pixels().map(|p| pixel_accepts(id, p)).collect();
    BinaryMask::from_raw(img.width(), img.height(), data).expect("image dimensions are consistent")
}
