use serde::{Deserialize, Serialize};

use super::BoundaryCurve;
use crate::error::{Error, Result};

pub const DEFAULT_SEGMENTS: usize = 10;

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Discrete Fréchet distance by dynamic programming over the coupling
/// table, two rows at a time. Empty input has no coupling and yields
/// `f64::INFINITY`.
pub fn discrete_frechet(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let m = b.len();
    let mut prev = vec![0.0f64; m];
    let mut cur = vec![0.0f64; m];
    for (i, &pa) in a.iter().enumerate() {
        for (j, &pb) in b.iter().enumerate() {
            let d = dist(pa, pb);
            cur[j] = match (i, j) {
                (0, 0) => d,
                (0, _) => cur[j - 1].max(d),
                (_, 0) => prev[0].max(d),
                _ => prev[j].min(prev[j - 1]).min(cur[j - 1]).max(d),
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m - 1]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub mean_segment_frechet: f64,
    pub similarity_index: f64,
    pub per_segment: Vec<f64>,
}

/// Vertex indices splitting a polyline into `m` pieces of equal arc length
/// (each split at the vertex nearest the target length; pieces share their
/// end vertices).
fn split_indices(pts: &[[f64; 2]], m: usize) -> Result<Vec<usize>> {
    let mut cum = Vec::with_capacity(pts.len());
    let mut acc = 0.0;
    cum.push(0.0);
    for w in pts.windows(2) {
        acc += dist(w[0], w[1]);
        cum.push(acc);
    }
    if acc == 0.0 {
        return Err(Error::DegenerateSegmentation(
            "curve has zero length".into(),
        ));
    }
    let mut idx = Vec::with_capacity(m + 1);
    let mut j = 0;
    for k in 0..=m {
        let target = acc * k as f64 / m as f64;
        while j + 1 < cum.len() && (cum[j + 1] - target).abs() < (cum[j] - target).abs() {
            j += 1;
        }
        idx.push(j);
    }
    idx[m] = pts.len() - 1;
    Ok(idx)
}

/// Splits both curves into `segments` equal-arc-length pieces, averages the
/// per-piece discrete Fréchet distances and maps the mean `d` to
/// `1 / (1 + d)`.
pub fn similarity_index(
    tracked: &BoundaryCurve,
    truth: &BoundaryCurve,
    segments: usize,
) -> Result<SimilarityReport> {
    if segments == 0 {
        return Err(Error::DegenerateSegmentation("zero segments".into()));
    }
    for (name, c) in [("tracked", tracked), ("truth", truth)] {
        if c.len() < segments.max(2) {
            return Err(Error::DegenerateSegmentation(format!(
                "{name} curve has {} points for {segments} segments",
                c.len()
            )));
        }
    }
    let a = tracked.as_f64();
    let b = truth.as_f64();
    let ia = split_indices(&a, segments)?;
    let ib = split_indices(&b, segments)?;
    let per_segment: Vec<f64> = (0..segments)
        .map(|k| discrete_frechet(&a[ia[k]..=ia[k + 1]], &b[ib[k]..=ib[k + 1]]))
        .collect();
    let mean = per_segment.iter().sum::<f64>() / segments as f64;
    Ok(SimilarityReport {
        mean_segment_frechet: mean,
        similarity_index: 1.0 / (1.0 + mean),
        per_segment,
    })
}

/// Symmetric mean nearest-vertex distance between two curves: the average
/// of the two directed means.
pub fn mean_deviation(a: &BoundaryCurve, b: &BoundaryCurve) -> f64 {
    fn directed(from: &BoundaryCurve, to: &BoundaryCurve) -> f64 {
        from.points
            .iter()
            .map(|p| {
                to.points
                    .iter()
                    .map(|q| p.dist(*q))
                    .fold(f64::INFINITY, f64::min)
            })
            .sum::<f64>()
            / from.points.len() as f64
    }
    0.5 * (directed(a, b) + directed(b, a))
}
