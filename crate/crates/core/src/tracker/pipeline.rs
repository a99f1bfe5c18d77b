use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classify::{classify_tensors, extract_patch_pair, ClassifiedModel};
use super::config::{TrackerConfig, TrackingMode};
use super::localize::{localize_tracked_point, Candidate};
use crate::error::{Error, Result};
use crate::geom::{
    connect_points, filter_tracked_points, normal_at, order_boundary, BoundaryCurve, OffsetPoint,
};
use crate::grid::Point;
use crate::texture::{contrast_map, ContrastMap};
use crate::volume::{normalize_section, BoundaryRecord, SeismicSection, SeismicVolume};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Tracked,
    /// Rejected by the median filter.
    Filtered,
    /// Every candidate patch overran the section or touched dead samples.
    NoCandidate,
    NormalUndefined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDiagnostic {
    pub index: usize,
    pub projected: Point,
    pub pixel: Option<Point>,
    pub offset: Option<i64>,
    pub e_min: Option<f64>,
    pub tensor: usize,
    pub candidates: usize,
    pub status: PointStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackedBoundary {
    pub inline_no: i64,
    pub curve: BoundaryCurve,
    /// Surviving tracked points, before gap filling.
    pub tracked: Vec<OffsetPoint>,
    pub diagnostics: Vec<PointDiagnostic>,
}

impl TrackedBoundary {
    pub fn record(&self) -> BoundaryRecord {
        BoundaryRecord {
            inline_no: self.inline_no,
            points: self.curve.points.clone(),
        }
    }
}

/// Contrast map of a normalized section, or an all-zero map when the
/// variant ignores contrast.
pub fn section_contrast(section: &SeismicSection, cfg: &TrackerConfig) -> Result<ContrastMap> {
    if cfg.variant.uses_contrast() {
        contrast_map(section, &cfg.glcm)
    } else {
        Ok(ContrastMap::zeros(section.width(), section.height()))
    }
}

fn prepare(section: &SeismicSection) -> Result<SeismicSection> {
    if section.normalized {
        Ok(section.clone())
    } else {
        normalize_section(section)
    }
}

/// Orders the labeled points and classifies the reference section.
pub fn build_model(
    section: &SeismicSection,
    boundary: &BoundaryRecord,
    cfg: &TrackerConfig,
) -> Result<ClassifiedModel> {
    cfg.validate()?;
    if boundary.inline_no != section.inline_no {
        return Err(Error::InvalidConfig(format!(
            "boundary is on inline {}, section is inline {}",
            boundary.inline_no, section.inline_no
        )));
    }
    let section = prepare(section)?;
    boundary.check_bounds(section.width(), section.height())?;
    let contrast = section_contrast(&section, cfg)?;
    let curve = order_boundary(
        &boundary.points,
        cfg.patch_dims,
        (section.width(), section.height()),
    )?;
    classify_tensors(&section, &contrast, &curve, cfg)
}

/// Tracks the model's boundary into `section`, normalizing it and computing
/// its contrast map first.
pub fn track_section(
    model: &ClassifiedModel,
    section: &SeismicSection,
    cfg: &TrackerConfig,
) -> Result<TrackedBoundary> {
    let section = prepare(section)?;
    let contrast = section_contrast(&section, cfg)?;
    track_section_with_contrast(model, &section, &contrast, cfg)
}

/// Candidate pixels along the normal at `p`, one per distinct rounded pixel.
/// When two offsets round to the same pixel the smaller `|offset|` is kept.
/// Returned in ascending offset order.
pub fn candidate_pixels(p: Point, normal: (f64, f64), reach: i64) -> Vec<(i64, Point)> {
    let mut order: Vec<i64> = (-reach..=reach).collect();
    order.sort_by_key(|&j| (j.abs(), j));
    let mut out: Vec<(i64, Point)> = Vec::with_capacity(order.len());
    for j in order {
        let q = Point::new(
            (p.x as f64 + j as f64 * normal.0).round() as i64,
            (p.y as f64 + j as f64 * normal.1).round() as i64,
        );
        if !out.iter().any(|&(_, r)| r == q) {
            out.push((j, q));
        }
    }
    out.sort_by_key(|&(j, _)| j);
    out
}

/// Tracking on an already normalized section with a precomputed contrast
/// map. The model's tensors are cloned, so the model is left untouched.
/// The section is abandoned as unstable when more than half of the points
/// are either without an admissible candidate or dropped by the median
/// filter.
pub fn track_section_with_contrast(
    model: &ClassifiedModel,
    section: &SeismicSection,
    contrast: &ContrastMap,
    cfg: &TrackerConfig,
) -> Result<TrackedBoundary> {
    cfg.validate()?;
    if !section.normalized {
        return Err(Error::NotNormalized);
    }
    let reach = (section.inline_no - model.reference_inline).abs();
    if reach < 1 {
        return Err(Error::InvalidConfig(format!(
            "inline {} is the reference section",
            section.inline_no
        )));
    }
    let mut tensors = model.tensors.clone();
    let curve = &model.reference_curve;
    let mut diagnostics = Vec::with_capacity(curve.len());
    let mut tracked = Vec::with_capacity(curve.len());

    for (i, &p) in curve.points.iter().enumerate() {
        let tensor = model.assignment[i];
        let mut diag = PointDiagnostic {
            index: i,
            projected: p,
            pixel: None,
            offset: None,
            e_min: None,
            tensor,
            candidates: 0,
            status: PointStatus::NormalUndefined,
        };
        let normal = match normal_at(curve, i, cfg.normal_half_window) {
            Ok(n) => n,
            Err(e) => {
                log::warn!("inline {}: point {i} skipped: {e}", section.inline_no);
                diagnostics.push(diag);
                continue;
            }
        };
        let mut candidates = Vec::new();
        for (offset, pixel) in candidate_pixels(p, normal, reach) {
            match extract_patch_pair(section, contrast, pixel, cfg.patch_dims) {
                Ok((patch_s, patch_c)) => candidates.push(Candidate {
                    offset,
                    pixel,
                    patch_s,
                    patch_c,
                    contrast: contrast.grid.get(pixel.x as usize, pixel.y as usize),
                }),
                Err(Error::PatchOverrun { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        diag.candidates = candidates.len();
        if candidates.is_empty() {
            log::warn!(
                "inline {}: point {i} has no admissible candidate",
                section.inline_no
            );
            diag.status = PointStatus::NoCandidate;
            diagnostics.push(diag);
            continue;
        }
        let best = localize_tracked_point(&mut tensors[tensor], &candidates, cfg)?;
        diag.pixel = Some(best.pixel);
        diag.offset = Some(best.offset);
        diag.e_min = Some(best.error);
        diag.status = PointStatus::Tracked;
        diagnostics.push(diag);
        tracked.push(OffsetPoint {
            index: i,
            point: best.pixel,
            offset: best.offset as f64,
        });
    }

    // Points without an admissible candidate count as rejected alongside
    // those the median filter drops.
    let considered = diagnostics
        .iter()
        .filter(|d| d.status != PointStatus::NormalUndefined)
        .count();
    let unplaced = diagnostics
        .iter()
        .filter(|d| d.status == PointStatus::NoCandidate)
        .count();
    let unstable = |rejected: usize| Error::TrackingUnstable {
        rejected,
        total: considered,
    };
    if 2 * unplaced > considered {
        return Err(unstable(unplaced));
    }
    let kept = filter_tracked_points(&tracked, &cfg.median)?;
    let rejected = unplaced + tracked.len() - kept.len();
    if 2 * rejected > considered {
        return Err(unstable(rejected));
    }
    let mut k = 0;
    for t in &tracked {
        if kept.get(k).map(|q| q.index) == Some(t.index) {
            k += 1;
        } else {
            diagnostics[t.index].status = PointStatus::Filtered;
        }
    }
    let points: Vec<Point> = kept.iter().map(|q| q.point).collect();
    let curve = connect_points(&points)?;
    Ok(TrackedBoundary {
        inline_no: section.inline_no,
        curve,
        tracked: kept,
        diagnostics,
    })
}

#[derive(Debug)]
pub struct SectionOutcome {
    pub inline_no: i64,
    pub result: Result<TrackedBoundary>,
}

#[derive(Debug)]
pub struct VolumeTracking {
    pub model: ClassifiedModel,
    /// One entry per non-reference inline in the range, ascending.
    pub sections: Vec<SectionOutcome>,
}

/// Classifies the reference section once and tracks every other inline in
/// `range`. Anchored tracking runs sections in parallel on the current rayon
/// pool; chained tracking walks outward from the reference, re-classifying
/// each tracked section before moving on.
pub fn track_volume(
    volume: &SeismicVolume,
    reference_inline: i64,
    boundary: &BoundaryRecord,
    range: RangeInclusive<i64>,
    cfg: &TrackerConfig,
) -> Result<VolumeTracking> {
    cfg.validate()?;
    if !range.contains(&reference_inline) {
        return Err(Error::InvalidConfig(format!(
            "reference inline {reference_inline} outside {}..{}",
            range.start(),
            range.end()
        )));
    }
    for il in [*range.start(), *range.end()] {
        volume.header().inline_index(il)?;
    }
    let reference = volume.section(reference_inline)?;
    let model = build_model(&reference, boundary, cfg)?;
    let targets: Vec<i64> = range.filter(|&il| il != reference_inline).collect();

    let mut sections: Vec<SectionOutcome> = match cfg.mode {
        TrackingMode::Anchored => targets
            .par_iter()
            .map(|&il| SectionOutcome {
                inline_no: il,
                result: volume
                    .section(il)
                    .and_then(|s| track_section(&model, &s, cfg)),
            })
            .collect(),
        TrackingMode::Chained => {
            let below: Vec<i64> = targets
                .iter()
                .rev()
                .copied()
                .filter(|&il| il < reference_inline)
                .collect();
            let above: Vec<i64> = targets
                .iter()
                .copied()
                .filter(|&il| il > reference_inline)
                .collect();
            let (mut a, b) = rayon::join(
                || track_chain(volume, &model, &below, cfg),
                || track_chain(volume, &model, &above, cfg),
            );
            a.extend(b);
            a
        }
    };
    sections.sort_by_key(|s| s.inline_no);
    Ok(VolumeTracking { model, sections })
}

fn track_chain(
    volume: &SeismicVolume,
    model: &ClassifiedModel,
    inlines: &[i64],
    cfg: &TrackerConfig,
) -> Vec<SectionOutcome> {
    let mut out = Vec::with_capacity(inlines.len());
    let mut current: Option<ClassifiedModel> = None;
    let mut failed = false;
    for &il in inlines {
        if failed {
            out.push(SectionOutcome {
                inline_no: il,
                result: Err(Error::InvalidConfig(
                    "previous section in chain failed".into(),
                )),
            });
            continue;
        }
        let step = || -> Result<(TrackedBoundary, ClassifiedModel)> {
            let section = normalize_section(&volume.section(il)?)?;
            let contrast = section_contrast(&section, cfg)?;
            let tracked = track_section_with_contrast(
                current.as_ref().unwrap_or(model),
                &section,
                &contrast,
                cfg,
            )?;
            let curve = order_boundary(
                &tracked.curve.points,
                cfg.patch_dims,
                (section.width(), section.height()),
            )?;
            let next = classify_tensors(&section, &contrast, &curve, cfg)?;
            Ok((tracked, next))
        };
        match step() {
            Ok((tracked, next)) => {
                current = Some(next);
                out.push(SectionOutcome {
                    inline_no: il,
                    result: Ok(tracked),
                });
            }
            Err(e) => {
                failed = true;
                out.push(SectionOutcome {
                    inline_no: il,
                    result: Err(e),
                });
            }
        }
    }
    out
}
