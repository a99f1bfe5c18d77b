use serde::{Deserialize, Serialize};

use super::config::TrackerConfig;
use super::pair::TensorPair;
use crate::error::{Error, Result};
use crate::geom::BoundaryCurve;
use crate::grid::{Grid2, Point};
use crate::tensor::Tensor3;
use crate::texture::ContrastMap;
use crate::volume::SeismicSection;

/// Output of the reference-section classification.
#[derive(Debug, Clone)]
pub struct ClassifiedModel {
    pub tensors: Vec<TensorPair>,
    /// Tensor index of every reference-curve point.
    pub assignment: Vec<usize>,
    pub reference_inline: i64,
    pub reference_curve: BoundaryCurve,
    /// Curve points whose patches could not be extracted.
    pub skipped: Vec<usize>,
}

impl ClassifiedModel {
    pub fn tensor_count(&self) -> usize {
        self.tensors.len()
    }

    pub fn summary(&self) -> ModelSummary {
        ModelSummary {
            reference_inline: self.reference_inline,
            tensor_count: self.tensors.len(),
            members: self.tensors.iter().map(TensorPair::member_count).collect(),
            skipped: self.skipped.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub reference_inline: i64,
    pub tensor_count: usize,
    pub members: Vec<usize>,
    pub skipped: Vec<usize>,
}

fn copy_patch(grid: &Grid2, center: Point, dims: (usize, usize)) -> Option<Vec<f64>> {
    let (h1, h2) = ((dims.0 / 2) as i64, (dims.1 / 2) as i64);
    let (x0, y0) = (center.x - h1, center.y - h2);
    if x0 < 0
        || y0 < 0
        || x0 as usize + dims.0 > grid.width()
        || y0 as usize + dims.1 > grid.height()
    {
        return None;
    }
    let mut out = Vec::with_capacity(dims.0 * dims.1);
    for b in 0..dims.1 {
        for a in 0..dims.0 {
            out.push(grid.get(x0 as usize + a, y0 as usize + b));
        }
    }
    Some(out)
}

/// Amplitude and contrast patches centred on `center`, each an
/// `I1 x I2 x 1` tensor (crossline along mode 1, time along mode 2).
/// Patches that overrun the section or touch dead samples are rejected.
pub fn extract_patch_pair(
    section: &SeismicSection,
    contrast: &ContrastMap,
    center: Point,
    dims: (usize, usize),
) -> Result<(Tensor3, Tensor3)> {
    if contrast.grid.width() != section.width() || contrast.grid.height() != section.height() {
        return Err(Error::DimensionMismatch(
            "contrast map does not match section".into(),
        ));
    }
    let overrun = || Error::PatchOverrun {
        x: center.x,
        y: center.y,
    };
    let s = copy_patch(&section.grid, center, dims).ok_or_else(overrun)?;
    if s.iter().any(|v| !v.is_finite()) {
        return Err(overrun());
    }
    let c = copy_patch(&contrast.grid, center, dims).ok_or_else(overrun)?;
    Ok((
        Tensor3::patch(dims.0, dims.1, s)?,
        Tensor3::patch(dims.0, dims.1, c)?,
    ))
}

/// Groups consecutive boundary patches into texture tensors. The current
/// tensor is tentatively extended with each new patch pair; if the pair's
/// unweighted reconstruction error against the extended bases stays within
/// the threshold the extension is kept, otherwise the pair opens a new
/// tensor.
pub fn classify_tensors(
    section: &SeismicSection,
    contrast: &ContrastMap,
    curve: &BoundaryCurve,
    cfg: &TrackerConfig,
) -> Result<ClassifiedModel> {
    cfg.validate()?;
    if !section.normalized {
        return Err(Error::NotNormalized);
    }
    if curve.is_empty() {
        return Err(Error::EmptyBoundary);
    }
    let mut tensors: Vec<TensorPair> = Vec::new();
    let mut assignment = Vec::with_capacity(curve.len());
    let mut skipped = Vec::new();

    for (i, &p) in curve.points.iter().enumerate() {
        let (ps, pc) = match extract_patch_pair(section, contrast, p, cfg.patch_dims) {
            Ok(pair) => pair,
            Err(Error::PatchOverrun { .. }) => {
                log::warn!(
                    "reference point {i} at ({}, {}) skipped: patch not admissible",
                    p.x,
                    p.y
                );
                skipped.push(i);
                assignment.push(tensors.len().saturating_sub(1));
                continue;
            }
            Err(e) => return Err(e),
        };
        match tensors.last_mut() {
            None => tensors.push(TensorPair::new(&ps, &pc, cfg.subspace_dims, cfg.variant)?),
            Some(current) => {
                let (e, trial) = current.trial_error(&ps, &pc, cfg.variant, 1.0, 1.0)?;
                if e <= cfg.error_threshold {
                    current.commit(&ps, &pc, trial)?;
                } else {
                    tensors.push(TensorPair::new(&ps, &pc, cfg.subspace_dims, cfg.variant)?);
                }
            }
        }
        assignment.push(tensors.len() - 1);
    }
    if tensors.is_empty() {
        return Err(Error::NoAdmissibleStart);
    }
    Ok(ClassifiedModel {
        tensors,
        assignment,
        reference_inline: section.inline_no,
        reference_curve: curve.clone(),
        skipped,
    })
}
