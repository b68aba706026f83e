use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::TrackKind;
use crate::units::{ActivationVector, ControlUnit, Region, UnitError};

/// A named mouthing or brow pose.
#[derive(Clone, Debug, PartialEq)]
pub struct LexiconPose {
    vector: ActivationVector,
    listed: Vec<ControlUnit>,
}

impl LexiconPose {
    pub fn vector(&self) -> &ActivationVector {
        &self.vector
    }

    /// Units given explicitly in the lexicon entry.
    pub fn listed_units(&self) -> &[ControlUnit] {
        &self.listed
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LexiconError {
    #[error("unknown pose `{0}`")]
    Unknown(String),
    #[error("pose `{name}` sets {unit}, which is outside the {region} face")]
    OutsideRegion {
        name: String,
        unit: ControlUnit,
        region: Region,
    },
}

/// Name → pose table for the mouthing and brows tracks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PoseLexicon {
    entries: BTreeMap<String, LexiconPose>,
}

impl PoseLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces an entry. Unlisted units are 0.
    pub fn insert(
        &mut self,
        name: impl Into<String>,
        values: &[(ControlUnit, f64)],
    ) -> Result<(), UnitError> {
        let vector = ActivationVector::from_pairs(values.iter().copied())?;
        let mut listed: Vec<_> = values.iter().map(|(u, _)| *u).collect();
        listed.sort();
        listed.dedup();
        self.entries
            .insert(name.into(), LexiconPose { vector, listed });
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&LexiconPose> {
        self.entries.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Looks up `name` for use on `track`, checking that every listed unit
    /// belongs to the track's region.
    pub fn resolve(&self, name: &str, track: TrackKind) -> Result<&ActivationVector, LexiconError> {
        let pose = self
            .get(name)
            .ok_or_else(|| LexiconError::Unknown(name.into()))?;
        if let Some(region) = track.lexicon_region() {
            if let Some(&unit) = pose.listed.iter().find(|u| u.region() != region) {
                return Err(LexiconError::OutsideRegion {
                    name: name.into(),
                    unit,
                    region,
                });
            }
        }
        Ok(&pose.vector)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolve_checks_region() {
        let mut lex = PoseLexicon::new();
        lex.insert(
            "pah",
            &[(ControlUnit::JawDrop, 0.6), (ControlUnit::LipsPart, 0.9)],
        )
        .unwrap();
        lex.insert("raised", &[(ControlUnit::InnerBrowRaiser, 0.8)])
            .unwrap();

        let pah = lex.resolve("pah", TrackKind::Mouthing).unwrap();
        assert_eq!(pah.get(ControlUnit::JawDrop), 0.6);
        assert_eq!(pah.get(ControlUnit::BrowLowerer), 0.0);

        assert_eq!(
            lex.resolve("raised", TrackKind::Mouthing),
            Err(LexiconError::OutsideRegion {
                name: "raised".into(),
                unit: ControlUnit::InnerBrowRaiser,
                region: Region::Lower,
            })
        );
        assert!(lex.resolve("raised", TrackKind::Brows).is_ok());
        assert_eq!(
            lex.resolve("oo", TrackKind::Mouthing),
            Err(LexiconError::Unknown("oo".into()))
        );
    }

    #[test]
    fn insert_validates_values() {
        let mut lex = PoseLexicon::new();
        assert!(lex.insert("bad", &[(ControlUnit::JawDrop, 1.5)]).is_err());
        assert!(lex.is_empty());
    }
}
