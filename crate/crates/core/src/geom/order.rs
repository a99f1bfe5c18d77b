use std::collections::HashSet;

use super::BoundaryCurve;
use crate::error::{Error, Result};
use crate::grid::Point;

/// Neighbor search order, clockwise from 12 o'clock with `y` pointing down:
/// up, up-right, right, down-right, down, down-left, left, up-left.
pub const NEIGHBOR_PRIORITY: [(i64, i64); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

/// Whether an `I1 x I2` patch centred on `p` lies inside a `width x height`
/// section.
pub fn is_patch_admissible(p: Point, patch: (usize, usize), section: (usize, usize)) -> bool {
    let (h1, h2) = ((patch.0 / 2) as i64, (patch.1 / 2) as i64);
    p.x - h1 >= 0 && p.y - h2 >= 0 && p.x + h1 < section.0 as i64 && p.y + h2 < section.1 as i64
}

/// Orders a one-pixel-wide 8-connected point set. Traversal starts at the
/// bottom-left admissible point (largest `y`, then smallest `x`) and always
/// steps to the first unvisited neighbor in [`NEIGHBOR_PRIORITY`].
/// Points whose patch would overrun the section are dropped first.
pub fn order_boundary(
    raw: &[Point],
    patch: (usize, usize),
    section: (usize, usize),
) -> Result<BoundaryCurve> {
    if raw.is_empty() {
        return Err(Error::EmptyBoundary);
    }
    let admissible: HashSet<Point> = raw
        .iter()
        .copied()
        .filter(|&p| is_patch_admissible(p, patch, section))
        .collect();
    let start = admissible
        .iter()
        .copied()
        .min_by_key(|p| (-p.y, p.x))
        .ok_or(Error::NoAdmissibleStart)?;

    let mut visited = HashSet::with_capacity(admissible.len());
    let mut points = Vec::with_capacity(admissible.len());
    let mut cur = start;
    loop {
        visited.insert(cur);
        points.push(cur);
        let next = NEIGHBOR_PRIORITY
            .iter()
            .map(|&(dx, dy)| Point::new(cur.x + dx, cur.y + dy))
            .find(|q| admissible.contains(q) && !visited.contains(q));
        match next {
            Some(q) => cur = q,
            None => break,
        }
    }
    if points.len() != admissible.len() {
        return Err(Error::Disconnected {
            visited: points.len(),
            total: admissible.len(),
        });
    }
    Ok(BoundaryCurve::open(points))
}
