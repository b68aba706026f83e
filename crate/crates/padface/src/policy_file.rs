//! Layer policy JSON:
//!
//! ```json
//! {
//!   "priority": ["emotion", "brows", "mouthing"],
//!   "affinity": {"brows": {"upper": 1.0, "mid": 0.0, "lower": 0.0}}
//! }
//! ```
//!
//! `priority` runs lowest to highest. Affinities not given keep their defaults.

use padface_core::{LayerPolicy, Region, TrackKind};
use serde_json::Value;

use crate::json_number;

#[derive(Debug, thiserror::Error)]
#[error("{path}: {message}")]
pub struct PolicyFileError {
    pub path: String,
    pub message: String,
}

impl PolicyFileError {
    pub fn kind(&self) -> &'static str {
        "MalformedPolicy"
    }
}

fn malformed(path: impl Into<String>, message: impl Into<String>) -> PolicyFileError {
    PolicyFileError {
        path: path.into(),
        message: message.into(),
    }
}

fn track(path: &str, name: &str) -> Result<TrackKind, PolicyFileError> {
    TrackKind::from_name(name).ok_or_else(|| malformed(path, format!("unknown track `{name}`")))
}

pub fn load_policy(source: &[u8]) -> Result<LayerPolicy, PolicyFileError> {
    let root: Value = serde_json::from_slice(source).map_err(|e| malformed("$", e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| malformed("$", "expected a JSON object"))?;

    let mut policy = match obj.get("priority") {
        None => LayerPolicy::default(),
        Some(value) => {
            let names = value
                .as_array()
                .ok_or_else(|| malformed("priority", "expected an array of track names"))?;
            let mut order = Vec::with_capacity(names.len());
            for (i, v) in names.iter().enumerate() {
                let path = format!("priority[{i}]");
                let name = v
                    .as_str()
                    .ok_or_else(|| malformed(&path, "expected a track name"))?;
                order.push(track(&path, name)?);
            }
            LayerPolicy::new(order).map_err(|e| malformed("priority", e.to_string()))?
        }
    };

    if let Some(value) = obj.get("affinity") {
        let kinds = value
            .as_object()
            .ok_or_else(|| malformed("affinity", "expected an object keyed by track"))?;
        for (kind_name, regions) in kinds {
            let path = format!("affinity.{kind_name}");
            let kind = track(&path, kind_name)?;
            let regions = regions
                .as_object()
                .ok_or_else(|| malformed(&path, "expected an object keyed by region"))?;
            for (region_name, v) in regions {
                let path = format!("{path}.{region_name}");
                let region = Region::from_name(region_name)
                    .ok_or_else(|| malformed(&path, format!("unknown region `{region_name}`")))?;
                let x = json_number(v).ok_or_else(|| malformed(&path, "expected a number"))?;
                policy = policy
                    .with_affinity(kind, region, x)
                    .map_err(|e| malformed(&path, e.to_string()))?;
            }
        }
    }
    Ok(policy)
}
