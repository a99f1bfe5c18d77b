use super::config::TrackerConfig;
use super::pair::TensorPair;
use crate::error::{Error, Result};
use crate::grid::Point;
use crate::tensor::Tensor3;

/// One admissible search position along a projected point's normal.
#[derive(Debug, Clone)]
pub struct Candidate {
    /// Signed step along the normal, in `-R_s..=R_s`.
    pub offset: i64,
    pub pixel: Point,
    pub patch_s: Tensor3,
    pub patch_c: Tensor3,
    /// Normalized contrast at `pixel`.
    pub contrast: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Localized {
    pub offset: i64,
    pub pixel: Point,
    pub error: f64,
}

/// Scans candidates in ascending offset order and keeps the one with the
/// smallest weighted reconstruction error (`<=`, so a later candidate wins a
/// tie). Each error is measured against the bases of the pair extended by
/// that candidate; the winner's extension is then committed to `pair`.
pub fn localize_tracked_point(
    pair: &mut TensorPair,
    candidates: &[Candidate],
    cfg: &TrackerConfig,
) -> Result<Localized> {
    if candidates.windows(2).any(|w| w[0].offset >= w[1].offset) {
        return Err(Error::InvalidConfig(
            "candidates must be sorted by offset".into(),
        ));
    }
    let mut best = None;
    let mut e_min = f64::INFINITY;
    for (k, cand) in candidates.iter().enumerate() {
        let lambda_c = cfg.contrast_lambda(cand.contrast);
        let (e, trial) =
            pair.trial_error(&cand.patch_s, &cand.patch_c, cfg.variant, 1.0, lambda_c)?;
        if e <= e_min {
            e_min = e;
            best = Some((k, trial));
        }
    }
    let (k, trial) = best.ok_or(Error::NoAdmissibleCandidate(0))?;
    let winner = &candidates[k];
    pair.commit(&winner.patch_s, &winner.patch_c, trial)?;
    Ok(Localized {
        offset: winner.offset,
        pixel: winner.pixel,
        error: e_min,
    })
}
