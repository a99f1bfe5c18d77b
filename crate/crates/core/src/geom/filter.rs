use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Point;

/// A tracked point with its signed displacement along the search normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffsetPoint {
    /// Position in the projected boundary's traversal.
    pub index: usize,
    pub point: Point,
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MedianFilter {
    /// Odd sliding-window length.
    pub window: usize,
    /// Maximum allowed `|offset - local median|` in pixels.
    pub rejection_px: f64,
}

impl Default for MedianFilter {
    fn default() -> Self {
        MedianFilter {
            window: 5,
            rejection_px: 3.0,
        }
    }
}

/// Drops points whose offset strays more than `rejection_px` from the
/// median of the surrounding window. Windows are shifted inward at the ends
/// so every median sees `window` samples. Rejecting more than half of the
/// points is reported as unstable tracking.
pub fn filter_tracked_points(
    points: &[OffsetPoint],
    filter: &MedianFilter,
) -> Result<Vec<OffsetPoint>> {
    let w = filter.window;
    if w < 1 || w % 2 == 0 {
        return Err(Error::InvalidConfig(format!(
            "median window {w} must be odd"
        )));
    }
    let n = points.len();
    if n < w {
        return Err(Error::TooFewPoints { needed: w, got: n });
    }
    let half = w / 2;
    let mut buf = Vec::with_capacity(w);
    let kept: Vec<OffsetPoint> = points
        .iter()
        .enumerate()
        .filter(|&(i, p)| {
            let lo = i.saturating_sub(half).min(n - w);
            buf.clear();
            buf.extend(points[lo..lo + w].iter().map(|q| q.offset));
            buf.sort_by(f64::total_cmp);
            (p.offset - buf[half]).abs() <= filter.rejection_px
        })
        .map(|(_, p)| *p)
        .collect();
    let rejected = n - kept.len();
    if 2 * rejected > n {
        return Err(Error::TrackingUnstable { rejected, total: n });
    }
    Ok(kept)
}
