use super::BoundaryCurve;
use crate::error::{Error, Result};
use crate::grid::Point;

/// 8-connected raster of the segment `a..=b`: one pixel per step along the
/// major axis, minor coordinate rounded half away from zero.
pub fn rasterize_line(a: Point, b: Point) -> Vec<Point> {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let steps = dx.abs().max(dy.abs());
    if steps == 0 {
        return vec![a];
    }
    (0..=steps)
        .map(|k| {
            let t = k as f64 / steps as f64;
            Point::new(
                a.x + (t * dx as f64).round() as i64,
                a.y + (t * dy as f64).round() as i64,
            )
        })
        .collect()
}

/// Joins tracked points in order, bridging gaps with straight raster
/// segments and dropping consecutive duplicates.
pub fn connect_points(points: &[Point]) -> Result<BoundaryCurve> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: points.len(),
        });
    }
    let mut out: Vec<Point> = Vec::with_capacity(points.len() * 2);
    for pair in points.windows(2) {
        for p in rasterize_line(pair[0], pair[1]) {
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
    }
    Ok(BoundaryCurve::open(out))
}
