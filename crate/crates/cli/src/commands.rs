use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use salttrack_core::geom::{mean_deviation, similarity_index, BoundaryCurve, SimilarityReport};
use salttrack_core::synth::{generate, SynthSpec};
use salttrack_core::tensor::SubspaceDims;
use salttrack_core::texture::{contrast_map, save_contrast_map, ContrastMap, GlcmConfig};
use salttrack_core::tracker::{
    build_model, track_section, PointStatus, TrackedBoundary, TrackerConfig,
};
use salttrack_core::volume::{
    load_boundary, load_volume, normalize_section, save_boundary, save_volume, BoundaryRecord,
    SeismicSection,
};
use salttrack_core::{Error, Grid2};

use crate::args::{
    AttributeArgs, Command, EvaluateArgs, GlcmArgs, RenderArgs, SynthArgs, TrackArgs,
};
use crate::manifest::{Inputs, RunManifest, SectionEntry, SectionStatus, Timings};
use crate::render::{svg_overlay, Raster, Rgb};
use crate::{CliError, Outcome};

pub fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Synth(a) => cmd_synth(&a),
        Command::Attribute(a) => cmd_attribute(&a),
        Command::Track(a) => cmd_track(&a),
        Command::Evaluate(a) => cmd_evaluate(&a),
        Command::Render(a) => cmd_render(&a),
    }
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::Io {
            path: parent.to_path_buf(),
            source: e,
        })?;
    }
    fs::write(path, bytes).map_err(|e| {
        Error::Io {
            path: path.to_path_buf(),
            source: e,
        }
        .into()
    })
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    text.push('\n');
    write(path, text)
}

pub fn boundary_file_name(inline_no: i64) -> String {
    format!("inline_{inline_no}.csv")
}

fn glcm_config(g: &GlcmArgs) -> Result<GlcmConfig, CliError> {
    let cfg = GlcmConfig::with_radius(g.radius, g.levels);
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

/// Normalized section; a constant section maps to all zeros.
fn normalized_or_flat(section: &SeismicSection) -> Result<SeismicSection, CliError> {
    match normalize_section(section) {
        Ok(s) => Ok(s),
        Err(Error::DegenerateRange) => {
            log::warn!("inline {} is constant", section.inline_no);
            Ok(SeismicSection {
                inline_no: section.inline_no,
                grid: Grid2::zeros(section.width(), section.height()),
                normalized: true,
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_synth(a: &SynthArgs) -> Result<Outcome, CliError> {
    let mut spec = if a.textured {
        SynthSpec::textured()
    } else {
        SynthSpec::default()
    };
    if let Some(seed) = a.seed {
        spec.seed = seed;
    }
    if let Some(drift) = a.drift {
        spec.dome.drift_px_per_inline = drift;
    }
    if let Some(noise) = a.noise {
        spec.noise_sigma = noise;
    }
    if let Some(dims) = a.dims {
        spec.dims = dims;
        spec.dome.anchor_index = dims.0 / 2;
    }
    if let Some(start) = a.inline_start {
        spec.inline_start = start;
    }
    let (volume, truth) = generate(&spec)?;
    save_volume(&volume, &a.out)?;
    write_json(&a.out.join("synth.json"), &spec)?;
    let truth_dir = a.out.join("truth");
    fs::create_dir_all(&truth_dir).map_err(|e| Error::Io {
        path: truth_dir.clone(),
        source: e,
    })?;
    for record in &truth {
        save_boundary(record, truth_dir.join(boundary_file_name(record.inline_no)))?;
    }
    log::info!("wrote {} inlines to {}", truth.len(), a.out.display());
    Ok(Outcome::Success)
}

fn cmd_attribute(a: &AttributeArgs) -> Result<Outcome, CliError> {
    let cfg = glcm_config(&a.glcm)?;
    let volume = load_volume(&a.volume)?;
    let section = normalized_or_flat(&volume.section(a.inline)?)?;
    let map = contrast_map(&section, &cfg)?;
    save_contrast_map(&map, a.inline, &a.out)?;
    if let Some(path) = &a.render {
        write(path, Raster::grayscale(&map.grid).to_ppm())?;
    }
    Ok(Outcome::Success)
}

fn tracker_config(a: &TrackArgs) -> Result<TrackerConfig, CliError> {
    let cfg = TrackerConfig {
        patch_dims: a.patch,
        subspace_dims: SubspaceDims::new(a.subspace.0, a.subspace.1, a.subspace.2),
        error_threshold: a.threshold,
        glcm: GlcmConfig::with_radius(a.glcm.radius, a.glcm.levels),
        variant: a.variant,
        contrast_weight: a.contrast_weight,
        mode: a.mode.into(),
        ..TrackerConfig::default()
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

/// Overlay of the projected (blue) and tracked (green) boundaries.
fn track_render(
    section: &SeismicSection,
    projected: &[salttrack_core::Point],
    tracked: &TrackedBoundary,
) -> Raster {
    let mut r = Raster::grayscale(&section.grid);
    r.draw_polyline(projected, Rgb::BLUE);
    r.draw_polyline(&tracked.curve.points, Rgb::GREEN);
    r
}

fn section_similarity(
    truth_dir: &Path,
    tracked: &TrackedBoundary,
    segments: usize,
) -> Result<(SimilarityReport, f64), CliError> {
    let truth = BoundaryCurve::open(
        load_boundary(truth_dir.join(boundary_file_name(tracked.inline_no)), None)?.points,
    );
    let report = similarity_index(&tracked.curve, &truth, segments)?;
    Ok((report, mean_deviation(&tracked.curve, &truth)))
}

fn cmd_track(a: &TrackArgs) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let cfg = tracker_config(a)?;
    if !a.range.contains(&a.reference) {
        return Err(CliError::Usage(format!(
            "reference inline {} outside range {}..{}",
            a.reference,
            a.range.start(),
            a.range.end()
        )));
    }
    let volume = load_volume(&a.volume)?;
    for il in [*a.range.start(), *a.range.end()] {
        volume.header().inline_index(il)?;
    }
    let reference = volume.section(a.reference)?;
    let boundary = load_boundary(&a.boundary, Some((reference.width(), reference.height())))?;
    if boundary.inline_no != a.reference {
        return Err(Error::InvalidConfig(format!(
            "boundary is on inline {}, reference is {}",
            boundary.inline_no, a.reference
        ))
        .into());
    }

    let t = Instant::now();
    let model = build_model(&reference, &boundary, &cfg)?;
    let classify_ms = t.elapsed().as_secs_f64() * 1e3;
    log::info!(
        "reference inline {}: {} texture tensors",
        a.reference,
        model.tensor_count()
    );

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let targets: Vec<i64> = a.range.clone().filter(|&il| il != a.reference).collect();
    let chained = cfg.mode == salttrack_core::tracker::TrackingMode::Chained;
    let results: Vec<(i64, Result<(SeismicSection, TrackedBoundary), Error>, f64)> = if chained {
        let t = Instant::now();
        let run = pool.install(|| {
            salttrack_core::tracker::track_volume(
                &volume,
                a.reference,
                &boundary,
                a.range.clone(),
                &cfg,
            )
        })?;
        let ms = t.elapsed().as_secs_f64() * 1e3 / targets.len().max(1) as f64;
        run.sections
            .into_iter()
            .map(|s| {
                let il = s.inline_no;
                let r = s
                    .result
                    .and_then(|tb| Ok((normalize_section(&volume.section(il)?)?, tb)));
                (il, r, ms)
            })
            .collect()
    } else {
        pool.install(|| {
            targets
                .par_iter()
                .map(|&il| {
                    let t = Instant::now();
                    let r = volume.section(il).and_then(|s| {
                        let s = normalize_section(&s)?;
                        let tb = track_section(&model, &s, &cfg)?;
                        Ok((s, tb))
                    });
                    (il, r, t.elapsed().as_secs_f64() * 1e3)
                })
                .collect()
        })
    };

    fs::create_dir_all(&a.out).map_err(|e| Error::Io {
        path: a.out.clone(),
        source: e,
    })?;
    let mut sections = Vec::with_capacity(results.len());
    let mut timings = Timings {
        classify_ms,
        ..Timings::default()
    };
    for (il, result, ms) in results {
        timings.sections_ms.insert(il, ms);
        let entry = match result {
            Ok((section, tracked)) => {
                let csv = a.out.join(boundary_file_name(il));
                save_boundary(&tracked.record(), &csv)?;
                let diag = a.out.join(format!("inline_{il}.diagnostics.json"));
                write_json(&diag, &tracked)?;
                let render = if a.render {
                    let path = a.out.join(format!("inline_{il}.ppm"));
                    write(
                        &path,
                        track_render(&section, &model.reference_curve.points, &tracked).to_ppm(),
                    )?;
                    Some(path)
                } else {
                    None
                };
                let (similarity, mean_deviation) = match &a.truth {
                    Some(dir) => {
                        let (r, mad) = section_similarity(dir, &tracked, a.segments)?;
                        (Some(r), Some(mad))
                    }
                    None => (None, None),
                };
                let count =
                    |s: PointStatus| tracked.diagnostics.iter().filter(|d| d.status == s).count();
                SectionEntry {
                    inline: il,
                    status: SectionStatus::Ok,
                    error: None,
                    numerical: false,
                    boundary_csv: Some(csv),
                    diagnostics: Some(diag),
                    render,
                    tracked_points: count(PointStatus::Tracked),
                    filtered_points: count(PointStatus::Filtered),
                    skipped_points: count(PointStatus::NoCandidate)
                        + count(PointStatus::NormalUndefined),
                    similarity,
                    mean_deviation,
                }
            }
            Err(e) => {
                log::error!("inline {il}: {e}");
                SectionEntry {
                    inline: il,
                    status: SectionStatus::Failed,
                    error: Some(e.to_string()),
                    numerical: e.is_numerical(),
                    boundary_csv: None,
                    diagnostics: None,
                    render: None,
                    tracked_points: 0,
                    filtered_points: 0,
                    skipped_points: 0,
                    similarity: None,
                    mean_deviation: None,
                }
            }
        };
        sections.push(entry);
    }
    sections.sort_by_key(|s| s.inline);
    timings.total_ms = start.elapsed().as_secs_f64() * 1e3;

    let outcome = if sections
        .iter()
        .any(|s| s.status == SectionStatus::Failed && s.numerical)
    {
        Outcome::NumericalFailure
    } else if sections.iter().any(|s| s.status == SectionStatus::Failed) {
        Outcome::DataFailure
    } else {
        Outcome::Success
    };
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg,
        inputs: Inputs {
            volume: a.volume.clone(),
            boundary: a.boundary.clone(),
            truth: a.truth.clone(),
        },
        reference_inline: a.reference,
        range: [*a.range.start(), *a.range.end()],
        model: Some(model.summary()),
        sections,
        timings,
    };
    write_json(&a.out.join("manifest.json"), &manifest)?;
    Ok(outcome)
}

/// `inline -> path` for every boundary CSV in a directory.
fn boundary_dir(dir: &Path) -> Result<Vec<(i64, PathBuf)>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|e| Error::Io {
                path: dir.to_path_buf(),
                source: e,
            })?
            .path();
        if path.extension().is_some_and(|e| e == "csv") {
            let record = load_boundary(&path, None)?;
            out.push((record.inline_no, path));
        }
    }
    out.sort();
    Ok(out)
}

fn evaluate_pair(
    tracked: &BoundaryRecord,
    truth: &BoundaryRecord,
    segments: usize,
) -> Result<SimilarityReport, CliError> {
    if tracked.inline_no != truth.inline_no {
        return Err(Error::InvalidConfig(format!(
            "inline mismatch: tracked {} vs truth {}",
            tracked.inline_no, truth.inline_no
        ))
        .into());
    }
    Ok(similarity_index(
        &BoundaryCurve::open(tracked.points.clone()),
        &BoundaryCurve::open(truth.points.clone()),
        segments,
    )?)
}

fn cmd_evaluate(a: &EvaluateArgs) -> Result<Outcome, CliError> {
    let text = if a.tracked.is_dir() && a.truth.is_dir() {
        let truth: std::collections::BTreeMap<i64, PathBuf> =
            boundary_dir(&a.truth)?.into_iter().collect();
        let mut csv = String::from("inline,mean_segment_frechet,similarity_index\n");
        for (il, path) in boundary_dir(&a.tracked)? {
            let Some(truth_path) = truth.get(&il) else {
                log::warn!("no ground truth for inline {il}");
                continue;
            };
            let r = evaluate_pair(
                &load_boundary(&path, None)?,
                &load_boundary(truth_path, None)?,
                a.segments,
            )?;
            csv.push_str(&format!(
                "{il},{},{}\n",
                r.mean_segment_frechet, r.similarity_index
            ));
        }
        csv
    } else if a.tracked.is_file() && a.truth.is_file() {
        let r = evaluate_pair(
            &load_boundary(&a.tracked, None)?,
            &load_boundary(&a.truth, None)?,
            a.segments,
        )?;
        let mut s = serde_json::to_string_pretty(&r).map_err(Error::from)?;
        s.push('\n');
        s
    } else {
        return Err(CliError::Usage(
            "--tracked and --truth must both be files or both be directories".into(),
        ));
    };
    match &a.out {
        Some(path) => write(path, text)?,
        None => print!("{text}"),
    }
    Ok(Outcome::Success)
}

fn cmd_render(a: &RenderArgs) -> Result<Outcome, CliError> {
    let palette = [
        Rgb::GREEN,
        Rgb::BLUE,
        Rgb::RED,
        Rgb(240, 220, 40),
        Rgb(40, 220, 230),
        Rgb(220, 50, 220),
    ];
    if !a.colors.is_empty() && a.colors.len() != a.boundaries.len() {
        return Err(CliError::Usage(format!(
            "{} colors given for {} boundaries",
            a.colors.len(),
            a.boundaries.len()
        )));
    }
    let volume = load_volume(&a.volume)?;
    let section = normalized_or_flat(&volume.section(a.inline)?)?;
    let mut curves = Vec::with_capacity(a.boundaries.len());
    for (i, path) in a.boundaries.iter().enumerate() {
        let record = load_boundary(path, Some((section.width(), section.height())))?;
        if record.inline_no != a.inline {
            return Err(Error::InvalidConfig(format!(
                "{} is on inline {}, rendering inline {}",
                path.display(),
                record.inline_no,
                a.inline
            ))
            .into());
        }
        let color = a
            .colors
            .get(i)
            .copied()
            .unwrap_or(palette[i % palette.len()]);
        curves.push((record.points, color));
    }
    let base = if a.contrast {
        let map: ContrastMap = contrast_map(&section, &glcm_config(&a.glcm)?)?;
        map.grid
    } else {
        section.grid.clone()
    };
    let mut raster = Raster::grayscale(&base);
    for (points, color) in &curves {
        raster.draw_polyline(points, *color);
    }
    write(&a.out, raster.to_ppm())?;
    if let Some(svg) = &a.svg {
        let refs: Vec<(&[salttrack_core::Point], Rgb)> =
            curves.iter().map(|(p, c)| (p.as_slice(), *c)).collect();
        write(svg, svg_overlay(section.width(), section.height(), &refs))?;
    }
    Ok(Outcome::Success)
}
