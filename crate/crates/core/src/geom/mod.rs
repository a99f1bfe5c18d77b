//! Boundary curves: traversal order, normals, outlier rejection, gap
//! filling and Fréchet-based comparison.

mod connect;
mod filter;
mod frechet;
mod normal;
mod order;

pub use connect::{connect_points, rasterize_line};
pub use filter::{filter_tracked_points, MedianFilter, OffsetPoint};
pub use frechet::{
    discrete_frechet, mean_deviation, similarity_index, SimilarityReport, DEFAULT_SEGMENTS,
};
pub use normal::{normal_at, DEFAULT_NORMAL_HALF_WINDOW};
pub use order::{is_patch_admissible, order_boundary, NEIGHBOR_PRIORITY};

use serde::{Deserialize, Serialize};

use crate::grid::Point;

/// Ordered pixel polyline within one section.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub points: Vec<Point>,
    pub closed: bool,
}

impl BoundaryCurve {
    pub fn open(points: Vec<Point>) -> Self {
        BoundaryCurve {
            points,
            closed: false,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn as_f64(&self) -> Vec<[f64; 2]> {
        self.points
            .iter()
            .map(|p| [p.x as f64, p.y as f64])
            .collect()
    }

    /// Shoelace sum `sum(x_i y_{i+1} - x_{i+1} y_i)` over the closed
    /// polygon; positive for clockwise traversal on screen (y down).
    pub fn signed_area2(&self) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| {
                let a = self.points[i];
                let b = self.points[(i + 1) % n];
                (a.x * b.y - b.x * a.y) as f64
            })
            .sum()
    }
}
