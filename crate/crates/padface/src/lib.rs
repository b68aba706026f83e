//! File formats, compile pipeline, CLI and HTTP service around `padface-core`.
//!
//! - [`grid_file`]: corner-pose grid JSON (canonical 6-decimal writer).
//! - [`lexicon_file`], [`policy_file`]: pose lexicon and layer policy JSON.
//! - [`curves`]: curve export as JSON or CSV.
//! - [`dataset`], [`report`]: valence/arousal CSV ingestion and pick reports.
//! - [`compile`]: annotation text → curve bytes, shared by the CLI and server.
//! - [`cli`], [`serve`]: the `padface` command and its HTTP API.

pub mod cli;
pub mod compile;
pub mod curves;
pub mod dataset;
pub mod diagnostics;
pub mod grid_file;
pub mod lexicon_file;
pub mod policy_file;
pub mod report;
pub mod serve;

/// The grid bundled with the tool, used when no `--grid` is given.
pub const DEFAULT_GRID_JSON: &str = include_str!("../data/default_grid.json");

/// The pose lexicon bundled with the tool, used when no `--lexicon` is given.
pub const DEFAULT_LEXICON_JSON: &str = include_str!("../data/default_lexicon.json");

pub fn default_grid() -> padface_core::CornerPoseGrid {
    grid_file::load_grid(DEFAULT_GRID_JSON.as_bytes()).expect("bundled grid is valid")
}

pub fn default_lexicon() -> padface_core::PoseLexicon {
    lexicon_file::load_lexicon(DEFAULT_LEXICON_JSON.as_bytes()).expect("bundled lexicon is valid")
}

/// Parses a JSON number, or a string holding one, as written by the grid format.
pub(crate) fn json_number(value: &serde_json::Value) -> Option<f64> {
    match value {
        serde_json::Value::Number(n) => n.as_f64(),
        serde_json::Value::String(s) => s.trim().parse().ok().filter(|v: &f64| v.is_finite()),
        _ => None,
    }
}

/// JSON string literal for `s`.
pub(crate) fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}
