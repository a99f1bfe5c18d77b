//! Gray-level co-occurrence matrices and the contrast attribute map.
//!
//! Offsets follow the usual Haralick convention with `y` pointing down
//! (time): 0° is `(1, 0)`, 45° is `(1, -1)`, 90° is `(0, -1)` and 135° is
//! `(-1, -1)`, each scaled by the pixel distance. Co-occurrences are ordered
//! pairs and are not symmetrized. Windows are clipped at section borders and
//! pairs touching dead (non-finite) samples are dropped.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid2, Point};
use crate::volume::{self, GridHeader, SeismicSection, ValueEncoding};

/// Level assigned to dead samples; never counted in a GLCM.
pub const NO_DATA: u16 = u16::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "0")]
    Deg0,
    #[serde(rename = "45")]
    Deg45,
    #[serde(rename = "90")]
    Deg90,
    #[serde(rename = "135")]
    Deg135,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Deg0,
        Direction::Deg45,
        Direction::Deg90,
        Direction::Deg135,
    ];

    pub fn unit(self) -> (i64, i64) {
        match self {
            Direction::Deg0 => (1, 0),
            Direction::Deg45 => (1, -1),
            Direction::Deg90 => (0, -1),
            Direction::Deg135 => (-1, -1),
        }
    }

    pub fn offset(self, distance: usize) -> (i64, i64) {
        let (dx, dy) = self.unit();
        (dx * distance as i64, dy * distance as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlcmConfig {
    /// Half-width of the square analysis window.
    pub radius: usize,
    /// Number of gray levels.
    pub levels: usize,
    pub directions: Vec<Direction>,
    pub distances: Vec<usize>,
}

impl Default for GlcmConfig {
    /// 9x9 windows, 32 levels, all four directions at distances 1..=4.
    fn default() -> Self {
        GlcmConfig::with_radius(4, 32)
    }
}

impl GlcmConfig {
    /// All four directions at every distance `1..=radius`.
    pub fn with_radius(radius: usize, levels: usize) -> Self {
        GlcmConfig {
            radius,
            levels,
            directions: Direction::ALL.to_vec(),
            distances: (1..=radius).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radius < 1 {
            return Err(Error::InvalidConfig("GLCM radius must be >= 1".into()));
        }
        if self.levels < 2 || self.levels >= NO_DATA as usize {
            return Err(Error::InvalidConfig(format!(
                "GLCM levels must be in 2..{NO_DATA}"
            )));
        }
        if self.directions.is_empty() || self.distances.is_empty() {
            return Err(Error::InvalidConfig("no GLCM offsets configured".into()));
        }
        if let Some(d) = self.distances.iter().find(|&&d| d < 1 || d > self.radius) {
            return Err(Error::InvalidConfig(format!(
                "GLCM distance {d} outside 1..={}",
                self.radius
            )));
        }
        Ok(())
    }

    /// Every configured `(dx, dy)` offset; its length is the number of GLCMs
    /// per pixel.
    pub fn offsets(&self) -> Vec<(i64, i64)> {
        self.directions
            .iter()
            .flat_map(|d| self.distances.iter().map(move |&k| d.offset(k)))
            .collect()
    }
}

/// Quantized section, same layout as [`Grid2`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelGrid {
    width: usize,
    height: usize,
    levels: usize,
    data: Vec<u16>,
}

impl LevelGrid {
    pub fn from_vec(width: usize, height: usize, levels: usize, data: Vec<u16>) -> Self {
        assert_eq!(data.len(), width * height);
        LevelGrid {
            width,
            height,
            levels,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.data[x * self.height + y]
    }

    #[inline]
    fn at(&self, x: i64, y: i64) -> Option<u16> {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            return None;
        }
        let v = self.get(x as usize, y as usize);
        (v != NO_DATA).then_some(v)
    }
}

/// `level = min(floor(v * levels), levels - 1)`; dead samples map to
/// [`NO_DATA`].
pub fn quantize(section: &SeismicSection, levels: usize) -> Result<LevelGrid> {
    quantize_grid(&section.grid, levels)
}

pub fn quantize_grid(grid: &Grid2, levels: usize) -> Result<LevelGrid> {
    if levels < 2 || levels >= NO_DATA as usize {
        return Err(Error::InvalidConfig(format!(
            "levels {levels} out of range"
        )));
    }
    let top = (levels - 1) as f64;
    let data = grid
        .data()
        .iter()
        .map(|&v| {
            if !v.is_finite() {
                Ok(NO_DATA)
            } else if !(0.0..=1.0).contains(&v) {
                Err(Error::NotNormalized)
            } else {
                Ok((v * levels as f64).floor().min(top) as u16)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LevelGrid::from_vec(
        grid.width(),
        grid.height(),
        levels,
        data,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Glcm {
    levels: usize,
    offset: (i64, i64),
    matrix: Vec<f64>,
}

impl Glcm {
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn offset(&self) -> (i64, i64) {
        self.offset
    }

    /// Probability of the ordered level pair `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.levels + j]
    }

    pub fn total(&self) -> f64 {
        self.matrix.iter().sum()
    }
}

fn window(center: i64, radius: usize, extent: usize) -> (i64, i64) {
    let lo = (center - radius as i64).max(0);
    let hi = (center + radius as i64).min(extent as i64 - 1);
    (lo, hi)
}

/// Co-occurrence matrix of the `(2 radius + 1)^2` window at `center`.
pub fn glcm_at(
    levels: &LevelGrid,
    center: Point,
    offset: (i64, i64),
    radius: usize,
) -> Result<Glcm> {
    if offset == (0, 0) {
        return Err(Error::InvalidConfig("GLCM offset (0, 0)".into()));
    }
    let n = levels.levels();
    let mut matrix = vec![0.0; n * n];
    let (x0, x1) = window(center.x, radius, levels.width());
    let (y0, y1) = window(center.y, radius, levels.height());
    let mut pairs = 0usize;
    for x in x0..=x1 {
        for y in y0..=y1 {
            let (qx, qy) = (x + offset.0, y + offset.1);
            if qx < x0 || qx > x1 || qy < y0 || qy > y1 {
                continue;
            }
            if let (Some(i), Some(j)) = (levels.at(x, y), levels.at(qx, qy)) {
                matrix[i as usize * n + j as usize] += 1.0;
                pairs += 1;
            }
        }
    }
    if pairs > 0 {
        let norm = 1.0 / pairs as f64;
        matrix.iter_mut().for_each(|v| *v *= norm);
    }
    Ok(Glcm {
        levels: n,
        offset,
        matrix,
    })
}

/// `sum_ij (i - j)^2 G[i, j]`.
pub fn glcm_contrast(g: &Glcm) -> f64 {
    let n = g.levels;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = i as f64 - j as f64;
            acc += d * d * g.matrix[i * n + j];
        }
    }
    acc
}

/// Contrast of one window/offset straight from the level pairs. Equal to
/// `glcm_contrast(glcm_at(..))` without materializing the matrix.
fn window_contrast(levels: &LevelGrid, cx: i64, cy: i64, offset: (i64, i64), radius: usize) -> f64 {
    let (x0, x1) = window(cx, radius, levels.width());
    let (y0, y1) = window(cy, radius, levels.height());
    let mut sum = 0u64;
    let mut pairs = 0u64;
    // Restrict the loop to pixels whose partner also lands in the window.
    let xs = (x0.max(x0 - offset.0), x1.min(x1 - offset.0));
    let ys = (y0.max(y0 - offset.1), y1.min(y1 - offset.1));
    for x in xs.0..=xs.1 {
        for y in ys.0..=ys.1 {
            if let (Some(i), Some(j)) = (levels.at(x, y), levels.at(x + offset.0, y + offset.1)) {
                let d = i as i64 - j as i64;
                sum += (d * d) as u64;
                pairs += 1;
            }
        }
    }
    if pairs == 0 {
        0.0
    } else {
        sum as f64 / pairs as f64
    }
}

/// Per-pixel contrast averaged over every configured offset, before any
/// normalization.
pub fn raw_contrast_field(levels: &LevelGrid, cfg: &GlcmConfig) -> Result<Grid2> {
    cfg.validate()?;
    if levels.levels() != cfg.levels {
        return Err(Error::InvalidConfig(format!(
            "level grid has {} levels, config {}",
            levels.levels(),
            cfg.levels
        )));
    }
    let offsets = cfg.offsets();
    let ng = offsets.len() as f64;
    let (w, h) = (levels.width(), levels.height());
    let columns: Vec<Vec<f64>> = (0..w)
        .into_par_iter()
        .map(|x| {
            (0..h)
                .map(|y| {
                    offsets
                        .iter()
                        .map(|&off| {
                            window_contrast(levels, x as i64, y as i64, off, cfg.radius) / ng
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(Grid2::from_vec(w, h, columns.concat()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContrastMap {
    pub grid: Grid2,
    pub normalized: bool,
    /// Set when the raw field was constant and the map was zeroed.
    pub degenerate: bool,
}

impl ContrastMap {
    /// All-zero map congruent with a `width x height` section.
    pub fn zeros(width: usize, height: usize) -> Self {
        ContrastMap {
            grid: Grid2::zeros(width, height),
            normalized: true,
            degenerate: true,
        }
    }
}

/// Contrast attribute of a normalized section, min-max scaled to `[0, 1]`.
pub fn contrast_map(section: &SeismicSection, cfg: &GlcmConfig) -> Result<ContrastMap> {
    cfg.validate()?;
    let levels = quantize(section, cfg.levels)?;
    let raw = raw_contrast_field(&levels, cfg)?;
    Ok(match volume::normalize_grid(&raw) {
        Ok(grid) => ContrastMap {
            grid,
            normalized: true,
            degenerate: false,
        },
        Err(Error::DegenerateRange) => {
            log::debug!("inline {}: constant contrast field", section.inline_no);
            ContrastMap::zeros(raw.width(), raw.height())
        }
        Err(e) => return Err(e),
    })
}

pub fn save_contrast_map(map: &ContrastMap, inline_no: i64, dir: impl AsRef<Path>) -> Result<()> {
    let header = GridHeader {
        kind: "contrast".into(),
        inline_no,
        crossline_count: map.grid.width(),
        time_count: map.grid.height(),
        normalized: map.normalized,
        value_encoding: ValueEncoding::Float32Le,
    };
    volume::save_grid(&header, &map.grid, dir)
}

pub fn load_contrast_map(dir: impl AsRef<Path>) -> Result<(i64, ContrastMap)> {
    let (header, grid) = volume::load_grid(dir)?;
    if header.kind != "contrast" {
        return Err(Error::MalformedHeader(format!(
            "expected kind \"contrast\", found {:?}",
            header.kind
        )));
    }
    let degenerate = grid.data().iter().all(|&v| v == 0.0);
    Ok((
        header.inline_no,
        ContrastMap {
            grid,
            normalized: header.normalized,
            degenerate,
        },
    ))
}
