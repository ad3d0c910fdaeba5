//! Per-pixel color transforms producing two-channel feature planes.
//!
//! The log-opponent pair `(I, B_y)` is built from `L(x) = 105 * log10(x + 1)`
//! on 8-bit channels with `I = L(G)` and `B_y = L(B) - (L(G) + L(R)) / 2`.
//! Multiplying a pixel by a constant `c` shifts `I` by roughly `105 * log10(c)`
//! and leaves `B_y` nearly fixed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::imaging::RgbImage;

/// Closed real interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

pub const LO_I_RANGE: Interval = Interval::new(0.0, 253.0);
pub const LO_BY_RANGE: Interval = Interval::new(-253.0, 253.0);
pub const HUE_RANGE: Interval = Interval::new(0.0, 360.0);
pub const UNIT_RANGE: Interval = Interval::new(0.0, 1.0);
pub const BYTE_RANGE: Interval = Interval::new(0.0, 255.0);

/// The seven feature pairs compared by the evaluation harness.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeaturePairId {
    #[default]
    IBy,
    HS,
    HV,
    SV,
    YCb,
    YCr,
    CbCr,
}

impl FeaturePairId {
    pub const ALL: [FeaturePairId; 7] = [
        FeaturePairId::IBy,
        FeaturePairId::HS,
        FeaturePairId::HV,
        FeaturePairId::SV,
        FeaturePairId::YCb,
        FeaturePairId::YCr,
        FeaturePairId::CbCr,
    ];

    pub fn token(self) -> &'static str {
        match self {
            FeaturePairId::IBy => "iby",
            FeaturePairId::HS => "hs",
            FeaturePairId::HV => "hv",
            FeaturePairId::SV => "sv",
            FeaturePairId::YCb => "ycb",
            FeaturePairId::YCr => "ycr",
            FeaturePairId::CbCr => "cbcr",
        }
    }
}

impl fmt::Display for FeaturePairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for FeaturePairId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        FeaturePairId::ALL
            .into_iter()
            .find(|p| p.token() == lower)
            .ok_or_else(|| format!("unknown feature pair '{s}' (expected one of iby, hs, hv, sv, ycb, ycr, cbcr)"))
    }
}

/// Two real-valued feature channels over an image.
#[derive(Clone, Debug, PartialEq)]
pub struct FeaturePlane {
    pub width: usize,
    pub height: usize,
    pub pair: FeaturePairId,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub range_a: Interval,
    pub range_b: Interval,
}

impl FeaturePlane {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn at(&self, x: usize, y: usize) -> (f64, f64) {
        let i = y * self.width + x;
        (self.a[i], self.b[i])
    }
}

/// `105 * log10(x + 1)`.
#[inline]
pub fn log_channel(x: u8) -> f64 {
    105.0 * (x as f64 + 1.0).log10()
}

#[inline]
pub fn lo_pixel([r, g, b]: [u8; 3]) -> (f64, f64) {
    let (lr, lg, lb) = (log_channel(r), log_channel(g), log_channel(b));
    (lg, lb - (lg + lr) / 2.0)
}

pub fn rgb_to_lo(img: &RgbImage) -> FeaturePlane {
    let (a, b) = img.pixels().map(lo_pixel).unzip();
    FeaturePlane {
        width: img.width(),
        height: img.height(),
        pair: FeaturePairId::IBy,
        a,
        b,
        range_a: LO_I_RANGE,
        range_b: LO_BY_RANGE,
    }
}

/// Hexcone HSV: hue in degrees `[0, 360)` (0 for achromatic pixels), S and V in `[0, 1]`.
#[inline]
pub fn hsv_pixel([r, g, b]: [u8; 3]) -> (f64, f64, f64) {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let v = max as f64 / 255.0;
    if max == min {
        return (0.0, 0.0, v);
    }
    let delta = (max - min) as f64;
    let s = delta / max as f64;
    let (r, g, b) = (r as f64, g as f64, b as f64);
    let mut h = if max as f64 == r {
        60.0 * (g - b) / delta
    } else if max as f64 == g {
        120.0 + 60.0 * (b - r) / delta
    } else {
        240.0 + 60.0 * (r - g) / delta
    };
    if h < 0.0 {
        h += 360.0;
    }
    if h >= 360.0 {
        h -= 360.0;
    }
    (h, s, v)
}

/// Full-range BT.601 `Y, Cb, Cr`, each clamped to `[0, 255]`.
#[inline]
pub fn ycbcr_pixel([r, g, b]: [u8; 3]) -> (f64, f64, f64) {
    let (r, g, b) = (r as f64, g as f64, b as f64);
    let y = 0.299 * r + 0.587 * g + 0.114 * b;
    let cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b;
    let cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b;
    (y.clamp(0.0, 255.0), cb.clamp(0.0, 255.0), cr.clamp(0.0, 255.0))
}

/// Separate H, S, V channels.
#[derive(Clone, Debug, PartialEq)]
pub struct HsvPlanes {
    pub width: usize,
    pub height: usize,
    pub h: Vec<f64>,
    pub s: Vec<f64>,
    pub v: Vec<f64>,
}

/// Separate Y, Cb, Cr channels.
#[derive(Clone, Debug, PartialEq)]
pub struct YCbCrPlanes {
    pub width: usize,
    pub height: usize,
    pub y: Vec<f64>,
    pub cb: Vec<f64>,
    pub cr: Vec<f64>,
}

pub fn rgb_to_hsv(img: &RgbImage) -> HsvPlanes {
    let n = img.len();
    let (mut h, mut s, mut v) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for p in img.pixels() {
        let (ph, ps, pv) = hsv_pixel(p);
        h.push(ph);
        s.push(ps);
        v.push(pv);
    }
    HsvPlanes {
        width: img.width(),
        height: img.height(),
        h,
        s,
        v,
    }
}

pub fn rgb_to_ycbcr(img: &RgbImage) -> YCbCrPlanes {
    let n = img.len();
    let (mut y, mut cb, mut cr) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for p in img.pixels() {
        let (py, pb, pr) = ycbcr_pixel(p);
        y.push(py);
        cb.push(pb);
        cr.push(pr);
    }
    YCbCrPlanes {
        width: img.width(),
        height: img.height(),
        y,
        cb,
        cr,
    }
}

/// Compute the feature plane for `pair`.
pub fn select_pair(img: &RgbImage, pair: FeaturePairId) -> FeaturePlane {
    let plane = |a, b, range_a, range_b| FeaturePlane {
        width: img.width(),
        height: img.height(),
        pair,
        a,
        b,
        range_a,
        range_b,
    };
    match pair {
        FeaturePairId::IBy => rgb_to_lo(img),
        FeaturePairId::HS | FeaturePairId::HV | FeaturePairId::SV => {
            let HsvPlanes { h, s, v, .. } = rgb_to_hsv(img);
            match pair {
                FeaturePairId::HS => plane(h, s, HUE_RANGE, UNIT_RANGE),
                FeaturePairId::HV => plane(h, v, HUE_RANGE, UNIT_RANGE),
                _ => plane(s, v, UNIT_RANGE, UNIT_RANGE),
            }
        }
        FeaturePairId::YCb | FeaturePairId::YCr | FeaturePairId::CbCr => {
            let YCbCrPlanes { y, cb, cr, .. } = rgb_to_ycbcr(img);
            match pair {
                FeaturePairId::YCb => plane(y, cb, BYTE_RANGE, BYTE_RANGE),
                FeaturePairId::YCr => plane(y, cr, BYTE_RANGE, BYTE_RANGE),
                _ => plane(cb, cr, BYTE_RANGE, BYTE_RANGE),
            }
        }
    }
}
