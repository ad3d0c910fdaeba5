//! Seeded synthetic scenes with exact ground truth.
//!
//! Each scene holds one face (an ellipse of skin with dark eyes and mouth),
//! a limb of the same skin tone, a background of non-skin rectangles, and a
//! few skin-like distractors (tinted or shadowed variants of the skin tone).
//! The whole image is scaled by a random illumination factor and perturbed
//! with small per-channel noise. Truth marks the face and limb skin only.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::evaluation::Sample;
use crate::face_region::{EyeAnnotation, EyePair};
use crate::imaging::{encode_mask_png, encode_rgb_png, BinaryMask, ImagingError, RgbImage};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub count: usize,
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    /// Illumination factor range applied to the whole scene.
    pub illumination: (f64, f64),
    /// Per-channel uniform noise amplitude.
    pub noise: i32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            count: 20,
            seed: 2024,
            width: 160,
            height: 120,
            illumination: (0.85, 1.15),
            noise: 3,
        }
    }
}

const SKIN_TONES: [[u8; 3]; 6] = [
    [236, 188, 160],
    [224, 172, 140],
    [198, 134, 100],
    [176, 118, 88],
    [141, 94, 68],
    [110, 72, 52],
];

// Blues, teals, purples and navies: far from skin in (I, B_y) and in hue.
const CLUTTER: [[u8; 3]; 8] = [
    [40, 70, 180],
    [70, 120, 200],
    [30, 120, 140],
    [120, 60, 160],
    [20, 25, 60],
    [90, 40, 120],
    [50, 150, 190],
    [60, 60, 110],
];

// Per-channel multipliers applied to the skin tone for distractor patches.
const DISTRACTORS: [[f64; 3]; 6] = [
    [1.0, 0.9, 0.75],
    [0.78, 0.78, 0.78],
    [1.0, 0.95, 1.2],
    [0.95, 1.0, 0.85],
    [1.15, 1.0, 0.95],
    [0.9, 0.8, 0.8],
];

const EYE: [u8; 3] = [25, 20, 20];
const MOUTH: [u8; 3] = [110, 30, 40];

fn scale(c: [u8; 3], k: f64) -> [f64; 3] {
    c.map(|v| v as f64 * k)
}

/// Generate one scene.
pub fn generate_scene(rng: &mut ChaCha8Rng, cfg: &SuiteConfig, id: String) -> Sample {
    let (w, h) = (cfg.width, cfg.height);
    let mut base: Vec<[f64; 3]> = vec![[0.0; 3]; w * h];
    let mut truth = BinaryMask::new(w, h);

    let bg = CLUTTER[rng.gen_range(0..CLUTTER.len())];
    for p in base.iter_mut() {
        *p = scale(bg, 1.0);
    }
    for _ in 0..rng.gen_range(6..12) {
        let c = CLUTTER[rng.gen_range(0..CLUTTER.len())];
        let (x0, y0) = (rng.gen_range(0..w), rng.gen_range(0..h));
        let (rw, rh) = (rng.gen_range(8..w / 2), rng.gen_range(8..h / 2));
        for y in y0..(y0 + rh).min(h) {
            for x in x0..(x0 + rw).min(w) {
                base[y * w + x] = scale(c, 1.0);
            }
        }
    }

    let skin = SKIN_TONES[rng.gen_range(0..SKIN_TONES.len())];
    for _ in 0..rng.gen_range(1..3) {
        let m = DISTRACTORS[rng.gen_range(0..DISTRACTORS.len())];
        let c = [0, 1, 2].map(|i| (skin[i] as f64 * m[i]).min(255.0));
        let (x0, y0) = (rng.gen_range(0..w), rng.gen_range(0..h));
        let (rw, rh) = (rng.gen_range(10..w / 3), rng.gen_range(10..h / 3));
        for y in y0..(y0 + rh).min(h) {
            for x in x0..(x0 + rw).min(w) {
                base[y * w + x] = c;
            }
        }
    }
    // face on the left half, limb on the right
    let d: f64 = rng.gen_range(30.0..38.0);
    let cx: f64 = rng.gen_range(0.25 * w as f64..0.32 * w as f64);
    let cy: f64 = rng.gen_range(0.42 * h as f64..0.55 * h as f64);
    let tilt: f64 = rng.gen_range(-0.12..0.12);
    let (ux, uy) = (tilt.cos(), tilt.sin());
    let (fa, fb) = (0.85 * d, 1.05 * d);
    let left = (cx - ux * d / 2.0, cy - uy * d / 2.0);
    let right = (cx + ux * d / 2.0, cy + uy * d / 2.0);
    let eye_r = d / 9.0;
    let mouth_c = (cx - uy * 0.55 * d, cy + ux * 0.55 * d);
    for y in 0..h {
        for x in 0..w {
            let (px, py) = (x as f64 + 0.5 - cx, y as f64 + 0.5 - cy);
            let along = ux * px + uy * py;
            let across = -uy * px + ux * py;
            if (along / fa).powi(2) + (across / fb).powi(2) > 1.0 {
                continue;
            }
            let pc = (x as f64 + 0.5, y as f64 + 0.5);
            let near = |c: (f64, f64), r: f64| (pc.0 - c.0).powi(2) + (pc.1 - c.1).powi(2) <= r * r;
            let i = y * w + x;
            if near(left, eye_r) || near(right, eye_r) {
                base[i] = scale(EYE, 1.0);
            } else if (pc.0 - mouth_c.0).abs() <= 0.3 * d && (pc.1 - mouth_c.1).abs() <= 0.06 * d {
                base[i] = scale(MOUTH, 1.0);
            } else {
                base[i] = scale(skin, 1.0);
                truth.set(x, y, true);
            }
        }
    }

    let lx0 = rng.gen_range((0.6 * w as f64) as usize..(0.7 * w as f64) as usize);
    let ly0 = rng.gen_range((0.1 * h as f64) as usize..(0.3 * h as f64) as usize);
    let (lw, lh) = (rng.gen_range(14..26), rng.gen_range(40..(0.65 * h as f64) as usize));
    for y in ly0..(ly0 + lh).min(h) {
        for x in lx0..(lx0 + lw).min(w) {
            base[y * w + x] = scale(skin, 1.0);
            truth.set(x, y, true);
        }
    }

    let k = rng.gen_range(cfg.illumination.0..=cfg.illumination.1);
    let mut data = Vec::with_capacity(w * h * 3);
    for p in &base {
        for c in p {
            let n = rng.gen_range(-cfg.noise..=cfg.noise) as f64;
            data.push((c * k + n).round().clamp(0.0, 255.0) as u8);
        }
    }
    let image = RgbImage::from_raw(w, h, data).expect("scene buffer matches dimensions");
    let eyes = EyePair::new(left, right).expect("generated eyes are distinct");
    Sample {
        id,
        image,
        truth,
        faces: vec![eyes],
    }
}

/// Generate `cfg.count` scenes named `scene_000`, `scene_001`, ...
pub fn generate_suite(cfg: &SuiteConfig) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.count)
        .map(|i| generate_scene(&mut rng, cfg, format!("scene_{i:03}")))
        .collect()
}

/// Write samples in the dataset directory layout (`images/`, `truth/`, `annotations.json`).
pub fn write_dataset(dir: &Path, samples: &[Sample]) -> Result<(), ImagingError> {
    let io = |path: &Path, source| ImagingError::Io {
        path: path.display().to_string(),
        source,
    };
    for sub in ["images", "truth"] {
        let p = dir.join(sub);
        std::fs::create_dir_all(&p).map_err(|e| io(&p, e))?;
    }
    let mut records = Vec::new();
    for s in samples {
        let name = format!("{}.png", s.id);
        let ip = dir.join("images").join(&name);
        std::fs::write(&ip, encode_rgb_png(&s.image)?).map_err(|e| io(&ip, e))?;
        let tp = dir.join("truth").join(&name);
        std::fs::write(&tp, encode_mask_png(&s.truth)?).map_err(|e| io(&tp, e))?;
        for f in &s.faces {
            records.push(EyeAnnotation {
                image: format!("images/{name}"),
                left_eye: [f.left.0, f.left.1],
                right_eye: [f.right.0, f.right.1],
            });
        }
    }
    let ap = dir.join("annotations.json");
    let json = serde_json::to_string_pretty(&records).expect("annotations serialize");
    std::fs::write(&ap, json + "\n").map_err(|e| io(&ap, e))
}
