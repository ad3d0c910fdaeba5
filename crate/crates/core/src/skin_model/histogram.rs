use serde::{Deserialize, Serialize};

use crate::colorspace::{FeaturePlane, Interval};
use crate::face_region::FaceSample;

use super::smoother::smooth_grid;

/// Joint histogram over a feature pair. Rows index the first feature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hist2D {
    pub bins_a: usize,
    pub bins_b: usize,
    pub range_a: Interval,
    pub range_b: Interval,
    /// Row-major `bins_a x bins_b`.
    pub counts: Vec<f64>,
    pub smoothed: bool,
    pub lambda: f64,
}

/// Uniform bin of `v` in `range`, with the upper edge folded into the last bin.
/// Values outside the range have no bin.
pub fn bin_index(v: f64, range: Interval, bins: usize) -> Option<usize> {
    if !range.contains(v) {
        return None;
    }
    let t = (v - range.lo) / range.width();
    Some(((t * bins as f64) as usize).min(bins - 1))
}

impl Hist2D {
    pub fn empty(bins: (usize, usize), range_a: Interval, range_b: Interval) -> Self {
        assert!(bins.0 > 0 && bins.1 > 0, "bin counts must be positive");
        Self {
            bins_a: bins.0,
            bins_b: bins.1,
            range_a,
            range_b,
            counts: vec![0.0; bins.0 * bins.1],
            smoothed: false,
            lambda: 0.0,
        }
    }

    pub fn cell_of(&self, a: f64, b: f64) -> Option<(usize, usize)> {
        Some((
            bin_index(a, self.range_a, self.bins_a)?,
            bin_index(b, self.range_b, self.bins_b)?,
        ))
    }

    pub fn get(&self, ia: usize, ib: usize) -> f64 {
        self.counts[ia * self.bins_b + ib]
    }

    pub fn set(&mut self, ia: usize, ib: usize, v: f64) {
        self.counts[ia * self.bins_b + ib] = v;
    }

    /// Density at the cell containing `(a, b)`; `None` outside the ranges.
    pub fn value_at(&self, a: f64, b: f64) -> Option<f64> {
        self.cell_of(a, b).map(|(ia, ib)| self.get(ia, ib))
    }

    pub fn add(&mut self, a: f64, b: f64) -> bool {
        match self.cell_of(a, b) {
            Some((ia, ib)) => {
                self.counts[ia * self.bins_b + ib] += 1.0;
                true
            }
            None => false,
        }
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }
}

/// Accumulate the sample pixels' feature values.
pub fn build_histogram(sample: &FaceSample, features: &FeaturePlane, bins: (usize, usize)) -> Hist2D {
    assert_eq!(
        sample.source_dims,
        (features.width, features.height),
        "feature plane must cover the sample's image"
    );
    let mut hist = Hist2D::empty(bins, features.range_a, features.range_b);
    for &(x, y) in &sample.pixels {
        let (a, b) = features.at(x, y);
        hist.add(a, b);
    }
    hist
}

/// Penalized least-squares smoothing along rows, then columns.
pub fn smooth_histogram(h: &Hist2D, lambda: f64) -> Hist2D {
    assert!(lambda >= 0.0, "smoothing penalty must be non-negative");
    Hist2D {
        counts: smooth_grid(&h.counts, h.bins_a, h.bins_b, lambda),
        smoothed: true,
        lambda,
        ..h.clone()
    }
}
