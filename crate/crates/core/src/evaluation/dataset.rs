//! Dataset directories: `images/`, `truth/` and `annotations.json`.
//!
//! Images and truth masks are paired by file stem, so `images/frame01.png`
//! matches `truth/frame01.png` or `truth/frame01.PNG`. Annotation records are
//! keyed by the image's file name.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::face_region::{parse_annotations, Annotations, EyePair};
use crate::imaging::{load_mask_png, load_png, BinaryMask, RgbImage};

use super::compare::{EvalReport, ImageEval, ImageIssue};
use super::{confusion, metrics};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read directory {path}: {source}")]
    Dir {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot read annotations {path}: {message}")]
    Annotations { path: String, message: String },
    #[error("no image/truth pairs found")]
    NoPairs,
}

/// One evaluation item held in memory.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub id: String,
    pub image: RgbImage,
    pub truth: BinaryMask,
    pub faces: Vec<EyePair>,
}

#[derive(Debug, Default)]
pub struct DatasetLoad {
    pub samples: Vec<Sample>,
    pub issues: Vec<ImageIssue>,
}

fn is_png(p: &Path) -> bool {
    p.extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case("png"))
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// PNG files in `dir`, keyed by stem (sorted).
fn pngs_by_stem(dir: &Path) -> Result<BTreeMap<String, PathBuf>, DatasetError> {
    let entries = std::fs::read_dir(dir).map_err(|source| DatasetError::Dir {
        path: dir.display().to_string(),
        source,
    })?;
    let mut out = BTreeMap::new();
    for entry in entries.flatten() {
        let path = entry.path();
        if path.is_file() && is_png(&path) {
            out.insert(stem(&path), path);
        }
    }
    Ok(out)
}

/// Pair files of two directories by stem. Returns `(stem, left, right)` for
/// matches and the stems present only on the left.
pub fn match_by_stem(left: &Path, right: &Path) -> Result<(Vec<(String, PathBuf, PathBuf)>, Vec<String>), DatasetError> {
    let l = pngs_by_stem(left)?;
    let r = pngs_by_stem(right)?;
    let mut pairs = Vec::new();
    let mut unmatched = Vec::new();
    for (k, lp) in l {
        match r.get(&k) {
            Some(rp) => pairs.push((k, lp, rp.clone())),
            None => unmatched.push(k),
        }
    }
    Ok((pairs, unmatched))
}

/// Load every image of `dir/images` with its truth mask and eye annotations.
/// Images without a usable truth mask are reported as issues and skipped.
pub fn load_dataset(dir: &Path) -> Result<DatasetLoad, DatasetError> {
    let ann_path = dir.join("annotations.json");
    let annotations: Annotations = if ann_path.exists() {
        let text = std::fs::read_to_string(&ann_path).map_err(|e| DatasetError::Annotations {
            path: ann_path.display().to_string(),
            message: e.to_string(),
        })?;
        parse_annotations(&text).map_err(|e| DatasetError::Annotations {
            path: ann_path.display().to_string(),
            message: e.to_string(),
        })?
    } else {
        log::warn!("{} not found; every image is treated as having no face", ann_path.display());
        Annotations::new()
    };
    let (pairs, missing) = match_by_stem(&dir.join("images"), &dir.join("truth"))?;
    let mut load = DatasetLoad::default();
    for id in missing {
        load.issues.push(ImageIssue {
            id,
            message: "missing truth mask".into(),
        });
    }
    for (id, img_path, truth_path) in pairs {
        let loaded = load_png(&img_path).and_then(|img| Ok((img, load_mask_png(&truth_path)?)));
        match loaded {
            Ok((image, truth)) if image.dims() != truth.dims() => load.issues.push(ImageIssue {
                id,
                message: format!("image is {:?} but truth mask is {:?}", image.dims(), truth.dims()),
            }),
            Ok((image, truth)) => {
                let key = img_path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
                let faces = annotations.get(&key).cloned().unwrap_or_default();
                load.samples.push(Sample { id, image, truth, faces });
            }
            Err(e) => load.issues.push(ImageIssue { id, message: e.to_string() }),
        }
    }
    load.issues.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(load)
}

/// Score every prediction mask in `pred_dir` against the same-stem mask in `truth_dir`.
pub fn evaluate_dirs(pred_dir: &Path, truth_dir: &Path) -> Result<(EvalReport, Vec<ImageIssue>), DatasetError> {
    let (pairs, missing) = match_by_stem(pred_dir, truth_dir)?;
    if pairs.is_empty() {
        return Err(DatasetError::NoPairs);
    }
    let mut issues: Vec<ImageIssue> = missing
        .into_iter()
        .map(|id| ImageIssue {
            id,
            message: "no truth mask with this name".into(),
        })
        .collect();
    let mut rows = Vec::new();
    for (id, pred_path, truth_path) in pairs {
        let scored = load_mask_png(&pred_path)
            .and_then(|p| Ok((p, load_mask_png(&truth_path)?)))
            .map_err(|e| e.to_string())
            .and_then(|(p, t)| confusion(&p, &t).map_err(|e| e.to_string()));
        match scored {
            Ok(c) => match metrics(&c) {
                Ok(m) => rows.push(ImageEval {
                    id,
                    confusion: c,
                    metrics: m,
                    fallback: None,
                }),
                Err(e) => issues.push(ImageIssue { id, message: e.to_string() }),
            },
            Err(message) => issues.push(ImageIssue { id, message }),
        }
    }
    issues.sort_by(|a, b| a.id.cmp(&b.id));
    Ok((EvalReport::from_rows("prediction".into(), rows), issues))
}
