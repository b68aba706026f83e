//! Grid JSON:
//!
//! ```json
//! {
//!   "name": "default",
//!   "poses": {
//!     "-1,-1": [0.600000, 0.000000, ...],
//!     ...
//!   },
//!   "units": ["inner_brow_raiser", ...],
//!   "version": 1
//! }
//! ```
//!
//! Pose arrays follow the file's `units` list, which may be in any order but
//! must name every control unit once. Activations may be numbers or numeric
//! strings. The writer sorts keys and always emits the canonical unit order
//! with 6 decimals.

use std::collections::BTreeMap;
use std::fmt::Write;

use padface_core::units::{GridError, UNIT_COUNT};
use padface_core::{ActivationVector, ControlUnit, Corner, CornerPoseGrid, Fixed6};
use serde_json::Value;

use crate::{json_number, json_string};

#[derive(Debug, thiserror::Error)]
pub enum GridFileError {
    #[error("{path}: {message}")]
    Malformed { path: String, message: String },
    #[error("{path}: {message}")]
    InvariantViolation { path: String, message: String },
}

impl GridFileError {
    pub fn kind(&self) -> &'static str {
        match self {
            GridFileError::Malformed { .. } => "MalformedGrid",
            GridFileError::InvariantViolation { .. } => "InvariantViolation",
        }
    }

    pub fn path(&self) -> &str {
        match self {
            GridFileError::Malformed { path, .. }
            | GridFileError::InvariantViolation { path, .. } => path,
        }
    }
}

fn malformed(path: impl Into<String>, message: impl Into<String>) -> GridFileError {
    GridFileError::Malformed {
        path: path.into(),
        message: message.into(),
    }
}

fn invariant(path: impl Into<String>, message: impl Into<String>) -> GridFileError {
    GridFileError::InvariantViolation {
        path: path.into(),
        message: message.into(),
    }
}

pub fn load_grid(source: &[u8]) -> Result<CornerPoseGrid, GridFileError> {
    let root: Value = serde_json::from_slice(source).map_err(|e| malformed("$", e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| malformed("$", "expected a JSON object"))?;

    let name = obj
        .get("name")
        .and_then(Value::as_str)
        .ok_or_else(|| malformed("name", "expected a string"))?;
    let version = obj
        .get("version")
        .and_then(Value::as_i64)
        .ok_or_else(|| malformed("version", "expected an integer"))?;

    let unit_names = obj
        .get("units")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("units", "expected an array of unit names"))?;
    let mut units = Vec::with_capacity(unit_names.len());
    for (i, v) in unit_names.iter().enumerate() {
        let path = format!("units[{i}]");
        let name = v
            .as_str()
            .ok_or_else(|| malformed(&path, "expected a unit name"))?;
        let unit = ControlUnit::from_name(name)
            .ok_or_else(|| malformed(&path, format!("unknown control unit `{name}`")))?;
        if units.contains(&unit) {
            return Err(malformed(
                path,
                format!("control unit `{name}` listed twice"),
            ));
        }
        units.push(unit);
    }
    if let Some(missing) = ControlUnit::ALL.iter().find(|u| !units.contains(u)) {
        return Err(malformed(
            "units",
            format!("missing control unit `{missing}`"),
        ));
    }

    let pose_map = obj
        .get("poses")
        .and_then(Value::as_object)
        .ok_or_else(|| malformed("poses", "expected an object keyed by \"p,a\""))?;
    let mut poses = BTreeMap::new();
    for (key, value) in pose_map {
        let path = format!("poses[\"{key}\"]");
        let corner = Corner::parse_key(key)
            .ok_or_else(|| malformed(&path, "key must be \"p,a\" with p, a in {-1, 0, 1}"))?;
        let values = value
            .as_array()
            .ok_or_else(|| malformed(&path, "expected an array of activations"))?;
        if values.len() != UNIT_COUNT {
            return Err(malformed(
                &path,
                format!("expected {UNIT_COUNT} activations, found {}", values.len()),
            ));
        }
        let mut dense = [0.0; UNIT_COUNT];
        for ((i, v), unit) in values.iter().enumerate().zip(&units) {
            let x = json_number(v)
                .ok_or_else(|| malformed(format!("{path}[{i}]"), "expected a number"))?;
            if !(0.0..=1.0).contains(&x) {
                return Err(invariant(
                    format!("{path}[{i}]"),
                    format!("{unit} = {x} is outside [0, 1]"),
                ));
            }
            dense[unit.index()] = x;
        }
        let vector = ActivationVector::new(dense).expect("range checked above");
        poses.insert(corner, vector);
    }

    CornerPoseGrid::new(name, version, &poses).map_err(|e| match e {
        GridError::MissingCorner(c) => malformed(
            format!("poses[\"{}\"]", c.key()),
            format!("missing corner {c}"),
        ),
        GridError::NonNeutralCenter { unit, value } => invariant(
            "poses[\"0,0\"]",
            format!("the (0,0) pose must be neutral (all zeros) but {unit} = {value:.6}"),
        ),
    })
}

/// Canonical grid JSON; byte-identical for equal grids.
pub fn save_grid(grid: &CornerPoseGrid) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"name\": {},", json_string(grid.name()));
    out.push_str("  \"poses\": {\n");
    let mut corners = Corner::ALL;
    corners.sort_by_key(|c| c.key());
    for (i, corner) in corners.iter().enumerate() {
        let values: Vec<String> = grid
            .pose(*corner)
            .values()
            .iter()
            .map(|v| Fixed6(*v).to_string())
            .collect();
        let sep = if i + 1 < corners.len() { "," } else { "" };
        let _ = writeln!(
            out,
            "    \"{}\": [{}]{sep}",
            corner.key(),
            values.join(", ")
        );
    }
    out.push_str("  },\n");
    let names: Vec<String> = ControlUnit::ALL
        .iter()
        .map(|u| json_string(u.name()))
        .collect();
    let _ = writeln!(out, "  \"units\": [{}],", names.join(", "));
    let _ = writeln!(out, "  \"version\": {}", grid.version());
    out.push_str("}\n");
    out
}
