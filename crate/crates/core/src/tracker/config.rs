use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{MedianFilter, DEFAULT_NORMAL_HALF_WINDOW};
use crate::tensor::{ResidualTerms, SubspaceDims};
use crate::texture::GlcmConfig;

/// Which texture features enter the reconstruction error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Amplitude and contrast tensors, all three modes.
    Full,
    /// Amplitude tensors only; no contrast tensors are built.
    NoContrast,
    /// Only the mode-3 (vectorized patch) term of both modalities.
    Vectorized,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Full, Variant::NoContrast, Variant::Vectorized];

    pub fn uses_contrast(self) -> bool {
        self != Variant::NoContrast
    }

    pub fn uses_modes12(self) -> bool {
        self != Variant::Vectorized
    }

    pub fn combine(
        self,
        s: &ResidualTerms,
        c: Option<&ResidualTerms>,
        lambda_s: f64,
        lambda_c: f64,
    ) -> f64 {
        let c = c.copied().unwrap_or_default();
        match self {
            Variant::Full => lambda_s * s.total() + lambda_c * c.total(),
            Variant::NoContrast => lambda_s * s.total(),
            Variant::Vectorized => lambda_s * s.mode3 + lambda_c * c.mode3,
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Variant::Full),
            "no_contrast" => Ok(Variant::NoContrast),
            "vectorized" => Ok(Variant::Vectorized),
            other => Err(Error::InvalidConfig(format!("unknown variant `{other}`"))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Full => "full",
            Variant::NoContrast => "no_contrast",
            Variant::Vectorized => "vectorized",
        })
    }
}

/// How predicted sections relate to the labeled one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrackingMode {
    /// Every section is tracked from the reference model.
    Anchored,
    /// Each section is tracked from its already-tracked neighbor, which is
    /// re-classified first.
    Chained,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackerConfig {
    /// Patch extent `(I1, I2)` along crossline and time; both odd.
    pub patch_dims: (usize, usize),
    pub subspace_dims: SubspaceDims,
    /// Classification threshold on the unweighted reconstruction error.
    pub error_threshold: f64,
    pub glcm: GlcmConfig,
    pub variant: Variant,
    /// Lower clamp of the contrast value before taking `|ln C|`.
    pub contrast_floor: f64,
    /// Fixed contrast weight replacing `|ln C|` during localization.
    pub contrast_weight: Option<f64>,
    pub median: MedianFilter,
    pub normal_half_window: usize,
    pub mode: TrackingMode,
}

impl Default for TrackerConfig {
    /// 31 x 31 patches, subspace dims (15, 15, 5), threshold 3 and 9 x 9
    /// GLCM windows.
    fn default() -> Self {
        TrackerConfig {
            patch_dims: (31, 31),
            subspace_dims: SubspaceDims::default(),
            error_threshold: 3.0,
            glcm: GlcmConfig::default(),
            variant: Variant::Full,
            contrast_floor: 1e-3,
            contrast_weight: None,
            median: MedianFilter::default(),
            normal_half_window: DEFAULT_NORMAL_HALF_WINDOW,
            mode: TrackingMode::Anchored,
        }
    }
}

impl TrackerConfig {
    pub fn with_variant(variant: Variant) -> Self {
        TrackerConfig {
            variant,
            ..TrackerConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (i1, i2) = self.patch_dims;
        if i1 < 3 || i2 < 3 || i1 % 2 == 0 || i2 % 2 == 0 {
            return Err(Error::InvalidConfig(format!(
                "patch dims {i1}x{i2} must be odd and >= 3"
            )));
        }
        if !(self.error_threshold > 0.0) {
            return Err(Error::InvalidConfig("error threshold must be > 0".into()));
        }
        if !(self.contrast_floor > 0.0 && self.contrast_floor < 1.0) {
            return Err(Error::InvalidConfig(
                "contrast floor must be in (0, 1)".into(),
            ));
        }
        if let Some(w) = self.contrast_weight {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::InvalidConfig(
                    "contrast weight must be finite and >= 0".into(),
                ));
            }
        }
        let d = self.subspace_dims;
        if d.p1 == 0 || d.p2 == 0 || d.p3 == 0 {
            return Err(Error::InvalidConfig("subspace dims must be >= 1".into()));
        }
        if self.median.window % 2 == 0 || !(self.median.rejection_px >= 0.0) {
            return Err(Error::InvalidConfig(
                "median window must be odd, rejection >= 0".into(),
            ));
        }
        self.glcm.validate()
    }

    /// `lambda_C = |ln C|` with `C` clamped to `[floor, 1]`, unless a fixed
    /// weight is configured.
    pub fn contrast_lambda(&self, contrast: f64) -> f64 {
        match self.contrast_weight {
            Some(w) => w,
            None => contrast.clamp(self.contrast_floor, 1.0).ln().abs(),
        }
    }
}
