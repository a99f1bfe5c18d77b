//! Seismic volume, section and boundary storage.
//!
//! A volume lives in a directory holding `header.json` and `samples.f32`
//! (raw little-endian float32, inline-major, time fastest). 2D grids such as
//! contrast maps use the same scheme with a `kind` field in the header.
//! Boundaries are CSV files with one `inline,crossline,time` row per point.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid2, Point};

pub const HEADER_FILE: &str = "header.json";
pub const SAMPLES_FILE: &str = "samples.f32";
pub const BOUNDARY_CSV_HEADER: &str = "inline,crossline,time";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValueEncoding {
    #[serde(rename = "float32-le")]
    Float32Le,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolumeHeader {
    pub inline_start: i64,
    pub inline_count: usize,
    pub crossline_start: i64,
    pub crossline_count: usize,
    pub time_start_ms: i64,
    pub time_step_ms: i64,
    pub time_count: usize,
    pub value_encoding: ValueEncoding,
}

impl VolumeHeader {
    pub fn validate(&self) -> Result<()> {
        if self.inline_count == 0 {
            return Err(Error::EmptyDimension("inline_count"));
        }
        if self.crossline_count == 0 {
            return Err(Error::EmptyDimension("crossline_count"));
        }
        if self.time_count == 0 {
            return Err(Error::EmptyDimension("time_count"));
        }
        if self.time_step_ms <= 0 {
            return Err(Error::MalformedHeader("time_step_ms must be > 0".into()));
        }
        Ok(())
    }

    pub fn sample_count(&self) -> usize {
        self.inline_count * self.crossline_count * self.time_count
    }

    /// Linear sample offset of `(inline index, crossline index, time index)`.
    #[inline]
    pub fn offset(&self, il: usize, xl: usize, t: usize) -> usize {
        (il * self.crossline_count + xl) * self.time_count + t
    }

    pub fn inline_numbers(&self) -> std::ops::Range<i64> {
        self.inline_start..self.inline_start + self.inline_count as i64
    }

    pub fn inline_index(&self, inline_no: i64) -> Result<usize> {
        if self.inline_numbers().contains(&inline_no) {
            Ok((inline_no - self.inline_start) as usize)
        } else {
            Err(Error::NoSuchInline(inline_no))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeismicVolume {
    header: VolumeHeader,
    samples: Vec<f32>,
}

impl SeismicVolume {
    pub fn new(header: VolumeHeader, samples: Vec<f32>) -> Result<Self> {
        header.validate()?;
        if samples.len() != header.sample_count() {
            return Err(Error::SampleCountMismatch {
                expected: header.sample_count(),
                found: samples.len(),
            });
        }
        Ok(SeismicVolume { header, samples })
    }

    pub fn header(&self) -> &VolumeHeader {
        &self.header
    }

    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    pub fn sample(&self, il: usize, xl: usize, t: usize) -> f32 {
        self.samples[self.header.offset(il, xl, t)]
    }

    /// Extracts the inline section with the given inline number (raw
    /// amplitudes, not normalized).
    pub fn section(&self, inline_no: i64) -> Result<SeismicSection> {
        let il = self.header.inline_index(inline_no)?;
        let (w, h) = (self.header.crossline_count, self.header.time_count);
        let start = self.header.offset(il, 0, 0);
        let data = self.samples[start..start + w * h]
            .iter()
            .map(|&v| v as f64)
            .collect();
        Ok(SeismicSection {
            inline_no,
            grid: Grid2::from_vec(w, h, data),
            normalized: false,
        })
    }
}

/// One inline slice; `grid` is indexed `(crossline x, time y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeismicSection {
    pub inline_no: i64,
    pub grid: Grid2,
    pub normalized: bool,
}

impl SeismicSection {
    pub fn new(inline_no: i64, grid: Grid2) -> Self {
        SeismicSection {
            inline_no,
            grid,
            normalized: false,
        }
    }

    pub fn width(&self) -> usize {
        self.grid.width()
    }

    pub fn height(&self) -> usize {
        self.grid.height()
    }
}

/// Min-max normalizes a section to `[0, 1]`. Non-finite samples (dead
/// traces) are left untouched and ignored when finding the range.
pub fn normalize_section(section: &SeismicSection) -> Result<SeismicSection> {
    let grid = normalize_grid(&section.grid)?;
    Ok(SeismicSection {
        inline_no: section.inline_no,
        grid,
        normalized: true,
    })
}

pub(crate) fn normalize_grid(grid: &Grid2) -> Result<Grid2> {
    let (lo, hi) = grid.finite_range().ok_or(Error::DegenerateRange)?;
    if hi <= lo {
        return Err(Error::DegenerateRange);
    }
    let span = hi - lo;
    Ok(grid.map(|v| if v.is_finite() { (v - lo) / span } else { v }))
}

fn read_header<T: for<'de> Deserialize<'de>>(dir: &Path) -> Result<T> {
    let path = dir.join(HEADER_FILE);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::MalformedHeader(e.to_string()))
}

fn read_f32_le(path: &Path) -> Result<Vec<f32>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() % 4 != 0 {
        return Err(Error::SampleCountMismatch {
            expected: bytes.len().div_ceil(4),
            found: bytes.len() / 4,
        });
    }
    Ok(bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}

fn write_f32_le(path: &Path, values: impl Iterator<Item = f32>) -> Result<()> {
    let bytes: Vec<u8> = values.flat_map(f32::to_le_bytes).collect();
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_volume(dir: impl AsRef<Path>) -> Result<SeismicVolume> {
    let dir = dir.as_ref();
    let header: VolumeHeader = read_header(dir)?;
    header.validate()?;
    let samples = read_f32_le(&dir.join(SAMPLES_FILE))?;
    SeismicVolume::new(header, samples)
}

pub fn save_volume(volume: &SeismicVolume, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_json(&dir.join(HEADER_FILE), &volume.header)?;
    write_f32_le(&dir.join(SAMPLES_FILE), volume.samples.iter().copied())
}

/// Header of a stored 2D grid (`kind` is e.g. `"contrast"`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub kind: String,
    pub inline_no: i64,
    pub crossline_count: usize,
    pub time_count: usize,
    pub normalized: bool,
    pub value_encoding: ValueEncoding,
}

pub fn save_grid(header: &GridHeader, grid: &Grid2, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    if grid.width() != header.crossline_count || grid.height() != header.time_count {
        return Err(Error::DimensionMismatch(format!(
            "grid {}x{} vs header {}x{}",
            grid.width(),
            grid.height(),
            header.crossline_count,
            header.time_count
        )));
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_json(&dir.join(HEADER_FILE), header)?;
    write_f32_le(
        &dir.join(SAMPLES_FILE),
        grid.data().iter().map(|&v| v as f32),
    )
}

pub fn load_grid(dir: impl AsRef<Path>) -> Result<(GridHeader, Grid2)> {
    let dir = dir.as_ref();
    let header: GridHeader = read_header(dir)?;
    if header.crossline_count == 0 {
        return Err(Error::EmptyDimension("crossline_count"));
    }
    if header.time_count == 0 {
        return Err(Error::EmptyDimension("time_count"));
    }
    let samples = read_f32_le(&dir.join(SAMPLES_FILE))?;
    let expected = header.crossline_count * header.time_count;
    if samples.len() != expected {
        return Err(Error::SampleCountMismatch {
            expected,
            found: samples.len(),
        });
    }
    let grid = Grid2::from_vec(
        header.crossline_count,
        header.time_count,
        samples.into_iter().map(f64::from).collect(),
    );
    Ok((header, grid))
}

/// A labeled boundary on one inline, in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryRecord {
    pub inline_no: i64,
    pub points: Vec<Point>,
}

impl BoundaryRecord {
    pub fn check_bounds(&self, width: usize, height: usize) -> Result<()> {
        for p in &self.points {
            if p.x < 0 || p.y < 0 || p.x as usize >= width || p.y as usize >= height {
                return Err(Error::OutOfBounds {
                    x: p.x,
                    y: p.y,
                    width,
                    height,
                });
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(16 * (self.points.len() + 1));
        out.push_str(BOUNDARY_CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", self.inline_no, p.x, p.y);
        }
        out
    }
}

pub fn parse_boundary(text: &str) -> Result<BoundaryRecord> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == BOUNDARY_CSV_HEADER => {}
        Some((i, l)) => {
            return Err(Error::MalformedBoundary {
                line: i + 1,
                reason: format!("expected header `{BOUNDARY_CSV_HEADER}`, found `{l}`"),
            })
        }
        None => return Err(Error::EmptyBoundary),
    }
    let mut inline_no = None;
    let mut points = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::MalformedBoundary {
                line: i + 1,
                reason: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let mut vals = [0i64; 3];
        for (v, f) in vals.iter_mut().zip(&fields) {
            *v = f.parse().map_err(|_| Error::MalformedBoundary {
                line: i + 1,
                reason: format!("non-integer field `{f}`"),
            })?;
        }
        match inline_no {
            None => inline_no = Some(vals[0]),
            Some(il) if il != vals[0] => {
                return Err(Error::MalformedBoundary {
                    line: i + 1,
                    reason: format!("inline {} differs from {il}", vals[0]),
                })
            }
            _ => {}
        }
        points.push(Point::new(vals[1], vals[2]));
    }
    let inline_no = inline_no.ok_or(Error::EmptyBoundary)?;
    Ok(BoundaryRecord { inline_no, points })
}

/// Loads a boundary CSV; `extent` is the `(crossline, time)` size of the
/// section the points must fall inside.
pub fn load_boundary(
    path: impl AsRef<Path>,
    extent: Option<(usize, usize)>,
) -> Result<BoundaryRecord> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let record = parse_boundary(&text)?;
    if let Some((w, h)) = extent {
        record.check_bounds(w, h)?;
    }
    Ok(record)
}

pub fn save_boundary(record: &BoundaryRecord, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, record.to_csv()).map_err(|e| Error::io(path, e))
}
