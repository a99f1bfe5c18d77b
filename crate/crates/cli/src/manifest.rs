use std::collections::BTreeMap;
use std::path::PathBuf;

use salttrack_core::geom::SimilarityReport;
use salttrack_core::tracker::{ModelSummary, TrackerConfig};
use serde::{Deserialize, Serialize};

/// Record of one `track` run, written as `manifest.json` beside the
/// outputs. Everything except `timings` is reproducible.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config: TrackerConfig,
    pub inputs: Inputs,
    pub reference_inline: i64,
    pub range: [i64; 2],
    pub model: Option<ModelSummary>,
    pub sections: Vec<SectionEntry>,
    pub timings: Timings,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Inputs {
    pub volume: PathBuf,
    pub boundary: PathBuf,
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SectionEntry {
    pub inline: i64,
    pub status: SectionStatus,
    pub error: Option<String>,
    /// Whether the failure was numerical (exit code 3) rather than a data error.
    pub numerical: bool,
    pub boundary_csv: Option<PathBuf>,
    pub diagnostics: Option<PathBuf>,
    pub render: Option<PathBuf>,
    pub tracked_points: usize,
    pub filtered_points: usize,
    pub skipped_points: usize,
    pub similarity: Option<SimilarityReport>,
    /// Symmetric mean nearest-vertex distance to the ground truth, px.
    pub mean_deviation: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Timings {
    pub classify_ms: f64,
    pub total_ms: f64,
    pub sections_ms: BTreeMap<i64, f64>,
}
