use serde::{Deserialize, Serialize};

use crate::colorspace::FeaturePlane;
use crate::face_region::FaceSample;

use super::histogram::Hist2D;
use super::ModelError;

/// Single elliptical Gaussian over a feature pair, diagonal covariance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianModel {
    pub mu: (f64, f64),
    /// Per-axis variances.
    pub sigma: (f64, f64),
    pub boundary_scale: f64,
    /// Use the variances themselves as semi-axes instead of `boundary_scale * sqrt(variance)`.
    pub literal_variance_axes: bool,
    /// Compare against the true radial distance to the ellipse boundary
    /// instead of `sqrt((sx cos t)^2 + (sy sin t)^2)`.
    pub exact_ellipse: bool,
}

impl GaussianModel {
    pub fn semi_axes(&self) -> (f64, f64) {
        if self.literal_variance_axes {
            self.sigma
        } else {
            (
                self.boundary_scale * self.sigma.0.sqrt(),
                self.boundary_scale * self.sigma.1.sqrt(),
            )
        }
    }

    /// Skin decision for one feature value.
    pub fn accepts(&self, a: f64, b: f64) -> bool {
        let dx = a - self.mu.0;
        let dy = b - self.mu.1;
        let d = (dx * dx + dy * dy).sqrt();
        if d == 0.0 {
            return true;
        }
        let tau = dy.atan2(dx);
        let (sx, sy) = self.semi_axes();
        let (c, s) = (tau.cos(), tau.sin());
        let boundary = if self.exact_ellipse {
            sx * sy / ((sy * c).powi(2) + (sx * s).powi(2)).sqrt()
        } else {
            ((sx * c).powi(2) + (sy * s).powi(2)).sqrt()
        };
        boundary > d
    }
}

/// Knobs carried into a fitted model that do not come from the data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryOptions {
    pub boundary_scale: f64,
    pub literal_variance_axes: bool,
    pub exact_ellipse: bool,
}

impl Default for BoundaryOptions {
    fn default() -> Self {
        Self {
            boundary_scale: 2.0,
            literal_variance_axes: false,
            exact_ellipse: false,
        }
    }
}

/// Mean and unbiased variance of the sample pixels whose histogram cell
/// exceeds `threshold`.
pub fn fit_gaussian(
    sample: &FaceSample,
    features: &FeaturePlane,
    hist: &Hist2D,
    threshold: f64,
    opts: BoundaryOptions,
) -> Result<GaussianModel, ModelError> {
    if !hist.smoothed {
        return Err(ModelError::NotSmoothed);
    }
    let kept: Vec<(f64, f64)> = sample
        .pixels
        .iter()
        .map(|&(x, y)| features.at(x, y))
        .filter(|&(a, b)| hist.value_at(a, b).is_some_and(|z| z > threshold))
        .collect();
    fit_points(&kept, opts)
}

pub(crate) fn fit_points(points: &[(f64, f64)], opts: BoundaryOptions) -> Result<GaussianModel, ModelError> {
    let n = points.len();
    if n < 2 {
        return Err(ModelError::Degenerate(format!(
            "{n} sample pixel(s) above the histogram threshold, need at least 2"
        )));
    }
    let nf = n as f64;
    let mu_a = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let mu_b = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let var_a = points.iter().map(|p| (p.0 - mu_a).powi(2)).sum::<f64>() / (nf - 1.0);
    let var_b = points.iter().map(|p| (p.1 - mu_b).powi(2)).sum::<f64>() / (nf - 1.0);
    // mean rounding can leave a residue of order eps * |mu| on identical inputs
    let floor = |mu: f64| (1e-9 * mu.abs().max(1.0)).powi(2);
    if var_a <= floor(mu_a) || var_b <= floor(mu_b) {
        return Err(ModelError::Degenerate(format!(
            "zero variance in the surviving sample (var = {var_a:.3e}, {var_b:.3e})"
        )));
    }
    Ok(GaussianModel {
        mu: (mu_a, mu_b),
        sigma: (var_a, var_b),
        boundary_scale: opts.boundary_scale,
        literal_variance_axes: opts.literal_variance_axes,
        exact_ellipse: opts.exact_ellipse,
    })
}
