//! Pleasure-arousal driven facial animation for signing avatars.
//!
//! The crate turns two-parameter emotion values and layered non-manual
//! annotation tracks into sampled facial control-unit curves:
//!
//! - [`units`]: the control-unit inventory, activation vectors and the 3×3
//!   corner-pose grid.
//! - [`emotion`]: (pleasure, arousal) values and their mapping onto the grid,
//!   either snapped to a corner or bilinearly interpolated.
//! - [`notation`]: the line-oriented annotation format and its timeline model.
//! - [`layering`]: envelopes, region-aware layer blending and frame sampling.
//! - [`reference`]: k-nearest reference selection over a valence/arousal table.
//!
//! Everything here is pure and `no_std` (with `alloc`); file formats, the CLI
//! and the HTTP service live in the `padface` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod emotion;
pub mod layering;
pub mod notation;
pub mod reference;
pub mod units;

mod num;

pub use crate::emotion::{
    corner_targets, pa_distance, pa_to_pose, MappingMode, PleasureArousal, Strictness,
};
pub use crate::layering::{
    blend_layers, envelope_eval, sample_timeline, Layer, LayerError, LayerPolicy, SampledCurve,
};
pub use crate::notation::{
    parse_annotation, serialize_annotation, validate_timeline, Diagnostic, PoseLexicon, Severity,
    Span, Timeline, TrackKind,
};
pub use crate::num::Fixed6;
pub use crate::reference::{corner_reference_sets, knn_pick, Dataset, Neighbor};
pub use crate::units::{
    vector_clamp, ActivationVector, ControlUnit, Corner, CornerPoseGrid, Region,
};
