//! Texture-tensor classification of a labeled boundary and localization of
//! the boundary in neighboring sections.

mod classify;
mod config;
mod localize;
mod pair;
mod pipeline;

pub use classify::{classify_tensors, extract_patch_pair, ClassifiedModel, ModelSummary};
pub use config::{TrackerConfig, TrackingMode, Variant};
pub use localize::{localize_tracked_point, Candidate, Localized};
pub use pair::{PairTrial, TensorPair};
pub use pipeline::{
    build_model, candidate_pixels, section_contrast, track_section, track_section_with_contrast,
    track_volume, PointDiagnostic, PointStatus, SectionOutcome, TrackedBoundary, VolumeTracking,
};
