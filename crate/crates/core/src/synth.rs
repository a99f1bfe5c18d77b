//! Deterministic synthetic salt-dome volumes with ground-truth boundaries.
//!
//! Each inline holds a dome whose cross-section is the upper half of an
//! ellipse standing on a vertical stock; the dome centre drifts along the
//! crossline axis by a fixed number of pixels per inline. The salt interior
//! is a smooth, weakly noisy field that moves with the dome. The surrounding
//! strata are horizontal layers built from two sinusoids plus Gaussian
//! noise. A thin Gaussian reflector follows the salt outline, as the strong
//! impedance contrast at a salt flank does in field data.
//!
//! Noise is counter-based so that any implementation can reproduce a volume
//! bit for bit: sample `(il, xl, t)` has counter `c = (il * XL + xl) * T + t`,
//! two uniforms `u_k = (splitmix64(seed ^ splitmix64(2c + k)) >> 11) / 2^53`
//! for `k = 0, 1`, and the Box-Muller variate
//! `sqrt(-2 ln(1 - u_0)) * cos(2 pi u_1)`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Point;
use crate::volume::{BoundaryRecord, SeismicVolume, ValueEncoding, VolumeHeader};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InteriorTexture {
    SmoothLowNoise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExteriorTexture {
    LayeredSinusoid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomeSpec {
    /// Dome centre crossline at the anchor inline.
    pub center_x: f64,
    /// Time index of the ellipse centre (the foot of the arc).
    pub center_y: f64,
    pub radius_x: f64,
    pub radius_y: f64,
    pub drift_px_per_inline: f64,
    /// Inline index (0-based) where the centre sits at `center_x`.
    pub anchor_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    /// `(inline, crossline, time)` sample counts.
    pub dims: (usize, usize, usize),
    pub inline_start: i64,
    pub dome: DomeSpec,
    pub interior_texture: InteriorTexture,
    pub exterior_texture: ExteriorTexture,
    /// Wavelengths (time samples) of the two layering sinusoids.
    pub layer_wavelengths: (f64, f64),
    /// Amplitude of the smooth salt-interior field, which moves with the
    /// dome.
    pub interior_amplitude: f64,
    /// Peak amplitude of the reflector along the salt outline.
    pub flank_reflector: f64,
    /// Gaussian half-width (px) of the outline reflector.
    pub flank_reflector_width: f64,
    /// Standard deviation of the strata noise.
    pub noise_sigma: f64,
    /// Interior noise standard deviation as a fraction of `noise_sigma`.
    pub interior_noise_fraction: f64,
    /// Clearance in pixels every boundary point keeps from the section edge.
    pub margin: usize,
    pub seed: u64,
}

impl Default for SynthSpec {
    /// 21 x 200 x 160 samples, 1 px/inline drift anchored at the middle
    /// inline, margins sized for 31 x 31 patches.
    fn default() -> Self {
        SynthSpec {
            dims: (21, 200, 160),
            inline_start: 389,
            dome: DomeSpec {
                center_x: 100.0,
                center_y: 128.0,
                radius_x: 48.0,
                radius_y: 72.0,
                drift_px_per_inline: 1.0,
                anchor_index: 10,
            },
            interior_texture: InteriorTexture::SmoothLowNoise,
            exterior_texture: ExteriorTexture::LayeredSinusoid,
            layer_wavelengths: (9.0, 23.0),
            interior_amplitude: 0.08,
            flank_reflector: 1.0,
            flank_reflector_width: 1.5,
            noise_sigma: 0.1,
            interior_noise_fraction: 0.2,
            margin: 15,
            seed: 0x5A17_D0DE,
        }
    }
}

impl SynthSpec {
    /// The default geometry with much stronger strata noise, where the
    /// amplitude texture alone becomes an unreliable guide.
    pub fn textured() -> Self {
        SynthSpec {
            noise_sigma: 0.6,
            ..SynthSpec::default()
        }
    }

    pub fn center_x(&self, il: usize) -> f64 {
        self.dome.center_x
            + self.dome.drift_px_per_inline * (il as f64 - self.dome.anchor_index as f64)
    }

    pub fn validate(&self) -> Result<()> {
        let (ni, nx, nt) = self.dims;
        if ni == 0 || nx == 0 || nt == 0 {
            return Err(Error::EmptyDimension("synthetic dims"));
        }
        if !(self.noise_sigma >= 0.0) || !(self.interior_noise_fraction >= 0.0) {
            return Err(Error::InvalidConfig("noise levels must be >= 0".into()));
        }
        if !(self.flank_reflector_width > 0.0) {
            return Err(Error::InvalidConfig(
                "flank reflector width must be > 0".into(),
            ));
        }
        let d = &self.dome;
        if d.radius_x < 2.0 || d.radius_y < 2.0 {
            return Err(Error::MarginViolation("radii must be >= 2 px".into()));
        }
        let m = self.margin as f64;
        let top = d.center_y - d.radius_y;
        if top < m || d.center_y + m > (nt - 1) as f64 {
            return Err(Error::MarginViolation(format!(
                "arc spans time {top}..{} within {nt} samples, margin {m}",
                d.center_y
            )));
        }
        for il in [0, ni - 1] {
            let cx = self.center_x(il);
            if cx - d.radius_x < m || cx + d.radius_x + m > (nx - 1) as f64 {
                return Err(Error::MarginViolation(format!(
                    "inline index {il}: arc spans crossline {}..{} within {nx}, margin {m}",
                    cx - d.radius_x,
                    cx + d.radius_x
                )));
            }
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn uniform(seed: u64, counter: u64) -> f64 {
    (splitmix64(seed ^ splitmix64(counter)) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal variate for sample counter `c`.
pub fn gaussian(seed: u64, c: u64) -> f64 {
    let u0 = uniform(seed, 2 * c);
    let u1 = uniform(seed, 2 * c + 1);
    (-2.0 * (1.0 - u0).ln()).sqrt() * (TAU * u1).cos()
}

/// Minimal 8-connected raster of the upper half-ellipse, from its
/// bottom-left foot over the crest to the bottom-right foot.
pub fn rasterize_arc(cx: f64, cy: f64, rx: f64, ry: f64) -> Vec<Point> {
    let steps = (4.0 * PI * rx.max(ry)).ceil() as usize * 4;
    let mut raw: Vec<Point> = Vec::with_capacity(steps);
    for k in 0..=steps {
        let theta = PI * (1.0 - k as f64 / steps as f64);
        let p = Point::new(
            (cx + rx * theta.cos()).round() as i64,
            (cy - ry * theta.sin()).round() as i64,
        );
        if raw.last() != Some(&p) {
            raw.push(p);
        }
    }
    let mut out = vec![raw[0]];
    for i in 1..raw.len() - 1 {
        if !out.last().unwrap().is_neighbor8(raw[i + 1]) {
            out.push(raw[i]);
        }
    }
    out.push(raw[raw.len() - 1]);
    out
}

fn is_interior(x: f64, y: f64, cx: f64, cy: f64, rx: f64, ry: f64) -> bool {
    if y >= cy {
        (x - cx).abs() <= rx
    } else {
        let (u, v) = ((x - cx) / rx, (y - cy) / ry);
        u * u + v * v <= 1.0
    }
}

/// Signed first-order distance from the dome outline, negative inside.
fn outline_distance(spec: &SynthSpec, u: f64, y: f64) -> f64 {
    let d = &spec.dome;
    if y >= d.center_y {
        u.abs() - d.radius_x
    } else {
        let (a, b) = (u / d.radius_x, (y - d.center_y) / d.radius_y);
        let f = a * a + b * b - 1.0;
        let g = 2.0 * (a / d.radius_x).hypot(b / d.radius_y);
        f / g
    }
}

fn generate_inline(spec: &SynthSpec, il: usize) -> Vec<f32> {
    let (_, nx, nt) = spec.dims;
    let d = &spec.dome;
    let cx = spec.center_x(il);
    let (l1, l2) = spec.layer_wavelengths;
    let mut out = Vec::with_capacity(nx * nt);
    for x in 0..nx {
        for y in 0..nt {
            let c = ((il * nx + x) * nt + y) as u64;
            let noise = gaussian(spec.seed, c);
            let (xf, yf) = (x as f64, y as f64);
            let v = if is_interior(xf, yf, cx, d.center_y, d.radius_x, d.radius_y) {
                let u = xf - cx;
                let smooth = spec.interior_amplitude
                    * ((TAU * u / 29.0 + 0.7).sin() * (TAU * yf / 37.0).cos()
                        + 0.5 * (TAU * (u + yf) / 19.0).sin());
                smooth + spec.interior_noise_fraction * spec.noise_sigma * noise
            } else {
                0.6 * (TAU * yf / l1).sin()
                    + 0.4 * (TAU * yf / l2 + 1.0).sin()
                    + spec.noise_sigma * noise
            };
            let s = outline_distance(spec, xf - cx, yf) / spec.flank_reflector_width;
            let v = v + spec.flank_reflector * (-0.5 * s * s).exp();
            out.push(v as f32);
        }
    }
    out
}

/// Builds the volume and one ground-truth boundary per inline.
pub fn generate(spec: &SynthSpec) -> Result<(SeismicVolume, Vec<BoundaryRecord>)> {
    spec.validate()?;
    let (ni, nx, nt) = spec.dims;
    let header = VolumeHeader {
        inline_start: spec.inline_start,
        inline_count: ni,
        crossline_start: 1,
        crossline_count: nx,
        time_start_ms: 0,
        time_step_ms: 4,
        time_count: nt,
        value_encoding: ValueEncoding::Float32Le,
    };
    let slabs: Vec<Vec<f32>> = (0..ni)
        .into_par_iter()
        .map(|il| generate_inline(spec, il))
        .collect();
    let volume = SeismicVolume::new(header, slabs.concat())?;
    let d = &spec.dome;
    let truth = (0..ni)
        .map(|il| BoundaryRecord {
            inline_no: spec.inline_start + il as i64,
            points: rasterize_arc(spec.center_x(il), d.center_y, d.radius_x, d.radius_y),
        })
        .collect();
    Ok((volume, truth))
}
