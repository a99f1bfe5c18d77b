use super::BoundaryCurve;
use crate::error::{Error, Result};

pub const DEFAULT_NORMAL_HALF_WINDOW: usize = 5;

/// Unit normal at `index`: the tangent is the principal axis of the points
/// within `half_window` steps (wrapping on closed curves, clipped on open
/// ones), oriented along traversal; the normal is the tangent turned a
/// quarter turn, `(-t_y, t_x)`.
pub fn normal_at(curve: &BoundaryCurve, index: usize, half_window: usize) -> Result<(f64, f64)> {
    let n = curve.points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    assert!(
        index < n,
        "index {index} out of range for curve of {n} points"
    );

    let window: Vec<[f64; 2]> = if curve.closed {
        let w = half_window.min((n - 1) / 2) as isize;
        (-w..=w)
            .map(|k| {
                let p = curve.points[(index as isize + k).rem_euclid(n as isize) as usize];
                [p.x as f64, p.y as f64]
            })
            .collect()
    } else {
        let lo = index.saturating_sub(half_window);
        let hi = (index + half_window).min(n - 1);
        curve.points[lo..=hi]
            .iter()
            .map(|p| [p.x as f64, p.y as f64])
            .collect()
    };

    let m = window.len() as f64;
    let cx = window.iter().map(|p| p[0]).sum::<f64>() / m;
    let cy = window.iter().map(|p| p[1]).sum::<f64>() / m;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in &window {
        let (dx, dy) = (p[0] - cx, p[1] - cy);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx + syy == 0.0 {
        return Err(Error::DegenerateTangent(index));
    }
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let (mut tx, mut ty) = (theta.cos(), theta.sin());

    let first = window[0];
    let last = window[window.len() - 1];
    let (mut chx, mut chy) = (last[0] - first[0], last[1] - first[1]);
    if chx == 0.0 && chy == 0.0 {
        let prev = curve.points[(index + n - 1) % n];
        let next = curve.points[(index + 1) % n];
        chx = (next.x - prev.x) as f64;
        chy = (next.y - prev.y) as f64;
    }
    if tx * chx + ty * chy < 0.0 {
        tx = -tx;
        ty = -ty;
    }
    Ok((-ty, tx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Point;

    #[test]
    fn horizontal_line() {
        let c = BoundaryCurve::open((0..10).map(|x| Point::new(x, 4)).collect());
        let (nx, ny) = normal_at(&c, 3, 5).unwrap();
        assert!(nx.abs() < 1e-12 && (ny.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_line() {
        let c = BoundaryCurve::open((0..10).map(|i| Point::new(i, i)).collect());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for i in [0, 4, 9] {
            let (nx, ny) = normal_at(&c, i, 5).unwrap();
            assert!((nx + h).abs() < 1e-9 && (ny - h).abs() < 1e-9, "{nx} {ny}");
        }
    }

    #[test]
    fn upward_traversal_points_right() {
        let c = BoundaryCurve::open((0..10).rev().map(|y| Point::new(3, y)).collect());
        let (nx, ny) = normal_at(&c, 5, 5).unwrap();
        assert!((nx - 1.0).abs() < 1e-12 && ny.abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_short() {
        let c = BoundaryCurve::open(vec![Point::new(1, 1), Point::new(1, 1)]);
        assert!(matches!(
            normal_at(&c, 0, 5),
            Err(Error::DegenerateTangent(0))
        ));
        let one = BoundaryCurve::open(vec![Point::new(1, 1)]);
        assert!(normal_at(&one, 0, 5).is_err());
    }
}
