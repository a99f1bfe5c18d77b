//! Raster (binary PPM) and vector (SVG) renderings of sections and
//! boundary overlays.

use std::fmt::Write as _;
use std::str::FromStr;

use salttrack_core::geom::rasterize_line;
use salttrack_core::{Grid2, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub const RED: Rgb = Rgb(230, 40, 40);
    pub const GREEN: Rgb = Rgb(40, 200, 60);
    pub const BLUE: Rgb = Rgb(50, 90, 240);

    pub fn hex(self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }
}

impl FromStr for Rgb {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let named = match s.to_ascii_lowercase().as_str() {
            "red" => Some(Rgb::RED),
            "green" => Some(Rgb::GREEN),
            "blue" => Some(Rgb::BLUE),
            "yellow" => Some(Rgb(240, 220, 40)),
            "cyan" => Some(Rgb(40, 220, 230)),
            "magenta" => Some(Rgb(220, 50, 220)),
            "white" => Some(Rgb(255, 255, 255)),
            "black" => Some(Rgb(0, 0, 0)),
            _ => None,
        };
        if let Some(c) = named {
            return Ok(c);
        }
        let hex = s
            .strip_prefix('#')
            .filter(|h| h.len() == 6)
            .ok_or_else(|| format!("unknown color '{s}'"))?;
        let byte = |i: usize| {
            u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| format!("bad hex color '{s}'"))
        };
        Ok(Rgb(byte(0)?, byte(2)?, byte(4)?))
    }
}

/// RGB raster, `width` crosslines by `height` time samples, row-major from
/// the top-left corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    width: usize,
    height: usize,
    pixels: Vec<Rgb>,
}

impl Raster {
    /// Grayscale image of a grid whose finite values lie in `[0, 1]`;
    /// non-finite samples are drawn black.
    pub fn grayscale(grid: &Grid2) -> Self {
        let (width, height) = (grid.width(), grid.height());
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let v = grid.get(x, y);
                let g = if v.is_finite() {
                    (v.clamp(0.0, 1.0) * 255.0).round() as u8
                } else {
                    0
                };
                pixels.push(Rgb(g, g, g));
            }
        }
        Raster {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        self.pixels[y * self.width + x]
    }

    fn put(&mut self, p: Point, c: Rgb) {
        if p.x >= 0 && p.y >= 0 && (p.x as usize) < self.width && (p.y as usize) < self.height {
            self.pixels[p.y as usize * self.width + p.x as usize] = c;
        }
    }

    /// Burns a polyline into the raster, joining consecutive points with
    /// rasterized segments.
    pub fn draw_polyline(&mut self, points: &[Point], color: Rgb) {
        match points {
            [] => {}
            [p] => self.put(*p, color),
            _ => {
                for w in points.windows(2) {
                    for p in rasterize_line(w[0], w[1]) {
                        self.put(p, color);
                    }
                }
            }
        }
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(self.pixels.len() * 3);
        for p in &self.pixels {
            out.extend_from_slice(&[p.0, p.1, p.2]);
        }
        out
    }
}

/// SVG document with one polyline per boundary over a `width x height`
/// canvas.
pub fn svg_overlay(width: usize, height: usize, curves: &[(&[Point], Rgb)]) -> String {
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    );
    s.push_str(&format!(
        "  <rect width=\"{width}\" height=\"{height}\" fill=\"none\" stroke=\"#808080\"/>\n"
    ));
    for (points, color) in curves {
        s.push_str("  <polyline fill=\"none\" stroke-width=\"1\" stroke=\"");
        s.push_str(&color.hex());
        s.push_str("\" points=\"");
        for (i, p) in points.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{},{}", p.x, p.y);
        }
        s.push_str("\"/>\n");
    }
    s.push_str("</svg>\n");
    s
}
