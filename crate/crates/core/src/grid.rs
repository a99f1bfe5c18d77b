//! Dense 2D grids and integer pixel coordinates.
//!
//! Grids are stored crossline-major with time varying fastest, matching the
//! on-disk layout of a volume so that an inline section is one contiguous
//! run of samples.

use serde::{Deserialize, Serialize};

/// Integer pixel position: `x` is the crossline index, `y` the time (depth)
/// index, increasing downward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub fn is_neighbor8(self, other: Point) -> bool {
        self != other && (self.x - other.x).abs() <= 1 && (self.y - other.y).abs() <= 1
    }

    pub fn dist(self, other: Point) -> f64 {
        let dx = (self.x - other.x) as f64;
        let dy = (self.y - other.y) as f64;
        dx.hypot(dy)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid2 {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Grid2 {
    pub fn zeros(width: usize, height: usize) -> Self {
        Grid2 {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    /// Builds a grid from crossline-major data (`data[x * height + y]`).
    pub fn from_vec(width: usize, height: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), width * height, "grid data length");
        Grid2 {
            width,
            height,
            data,
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for x in 0..width {
            for y in 0..height {
                data.push(f(x, y));
            }
        }
        Grid2 {
            width,
            height,
            data,
        }
    }

    /// Crossline extent.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Time extent.
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[x * self.height + y]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.data[x * self.height + y] = v;
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= 0 && p.y >= 0 && (p.x as usize) < self.width && (p.y as usize) < self.height
    }

    pub fn at(&self, p: Point) -> Option<f64> {
        self.contains(p)
            .then(|| self.get(p.x as usize, p.y as usize))
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Grid2 {
        Grid2 {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Minimum and maximum over finite samples, `None` if there are none.
    pub fn finite_range(&self) -> Option<(f64, f64)> {
        self.data
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold(None, |acc, v| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
    }
}
