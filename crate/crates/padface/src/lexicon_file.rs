//! Pose lexicon JSON: `{"pah": {"jaw_drop": 0.5, "lips_part": 0.9}, ...}`.
//!
//! Unlisted units are 0. Whether a pose stays inside its track's face region
//! is checked where the pose is used, since one name could serve either
//! track.

use padface_core::{ControlUnit, PoseLexicon};
use serde_json::Value;

use crate::json_number;

#[derive(Debug, thiserror::Error)]
#[error("{path}: {message}")]
pub struct LexiconFileError {
    pub path: String,
    pub message: String,
}

impl LexiconFileError {
    pub fn kind(&self) -> &'static str {
        "MalformedLexicon"
    }
}

fn malformed(path: impl Into<String>, message: impl Into<String>) -> LexiconFileError {
    LexiconFileError {
        path: path.into(),
        message: message.into(),
    }
}

pub fn load_lexicon(source: &[u8]) -> Result<PoseLexicon, LexiconFileError> {
    let root: Value = serde_json::from_slice(source).map_err(|e| malformed("$", e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| malformed("$", "expected an object of pose name → units"))?;
    let mut lexicon = PoseLexicon::new();
    for (name, entry) in obj {
        let units = entry
            .as_object()
            .ok_or_else(|| malformed(name, "expected an object of unit → activation"))?;
        let mut pairs = Vec::with_capacity(units.len());
        for (unit_name, value) in units {
            let path = format!("{name}.{unit_name}");
            let unit = ControlUnit::from_name(unit_name)
                .ok_or_else(|| malformed(&path, format!("unknown control unit `{unit_name}`")))?;
            let x = json_number(value).ok_or_else(|| malformed(&path, "expected a number"))?;
            pairs.push((unit, x));
        }
        lexicon
            .insert(name.as_str(), &pairs)
            .map_err(|e| malformed(name, e.to_string()))?;
    }
    Ok(lexicon)
}
