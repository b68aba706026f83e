//! Facial control units, activation vectors and the corner-pose grid.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use crate::num::quantize;

/// Coarse face region a control unit acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    Upper,
    Mid,
    Lower,
}

impl Region {
    pub const ALL: [Region; 3] = [Region::Upper, Region::Mid, Region::Lower];

    pub fn name(self) -> &'static str {
        match self {
            Region::Upper => "upper",
            Region::Mid => "mid",
            Region::Lower => "lower",
        }
    }

    pub fn from_name(name: &str) -> Option<Region> {
        Region::ALL.into_iter().find(|r| r.name() == name)
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

macro_rules! control_units {
    ($($variant:ident => $name:literal, $region:ident;)*) => {
        /// One abstract facial control, loosely modelled on FACS action units.
        ///
        /// The declaration order is the canonical inventory order used by every
        /// vector and every serialized format.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum ControlUnit {
            $($variant,)*
        }

        impl ControlUnit {
            /// Full inventory in canonical order.
            pub const ALL: [ControlUnit; UNIT_COUNT] = [$(ControlUnit::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(ControlUnit::$variant => $name,)*
                }
            }

            pub fn region(self) -> Region {
                match self {
                    $(ControlUnit::$variant => Region::$region,)*
                }
            }
        }
    };
}

/// Number of control units in the inventory.
pub const UNIT_COUNT: usize = 20;

control_units! {
    InnerBrowRaiser => "inner_brow_raiser", Upper;
    OuterBrowRaiser => "outer_brow_raiser", Upper;
    BrowLowerer => "brow_lowerer", Upper;
    UpperLidRaiser => "upper_lid_raiser", Upper;
    LidTightener => "lid_tightener", Upper;
    EyesWidener => "eyes_widener", Upper;
    NoseWrinkler => "nose_wrinkler", Mid;
    CheekRaiser => "cheek_raiser", Mid;
    InfraorbitalTightener => "infraorbital_tightener", Mid;
    UpperLipRaiser => "upper_lip_raiser", Lower;
    LipCornerPuller => "lip_corner_puller", Lower;
    LipCornerDepressor => "lip_corner_depressor", Lower;
    LowerLipDepressor => "lower_lip_depressor", Lower;
    ChinRaiser => "chin_raiser", Lower;
    LipPuckerer => "lip_puckerer", Lower;
    LipStretcher => "lip_stretcher", Lower;
    LipPressor => "lip_pressor", Lower;
    LipsPart => "lips_part", Lower;
    JawDrop => "jaw_drop", Lower;
    MouthStretch => "mouth_stretch", Lower;
}

impl ControlUnit {
    pub fn from_name(name: &str) -> Option<ControlUnit> {
        ControlUnit::ALL.into_iter().find(|u| u.name() == name)
    }

    /// Position in the canonical inventory order.
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ControlUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum UnitError {
    #[error("activation for {unit} is {value}, outside [0, 1]")]
    OutOfRange { unit: ControlUnit, value: f64 },
    #[error("no value given for control unit {0}")]
    MissingUnit(ControlUnit),
}

/// Dense face state: one activation in `[0, 1]` per control unit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActivationVector([f64; UNIT_COUNT]);

impl ActivationVector {
    pub const NEUTRAL: ActivationVector = ActivationVector([0.0; UNIT_COUNT]);

    pub fn new(values: [f64; UNIT_COUNT]) -> Result<Self, UnitError> {
        for (unit, &value) in ControlUnit::ALL.iter().zip(values.iter()) {
            if !(0.0..=1.0).contains(&value) {
                return Err(UnitError::OutOfRange { unit: *unit, value });
            }
        }
        Ok(ActivationVector(values))
    }

    /// Clamps every entry into `[0, 1]`; NaN becomes 0.
    pub fn clamped(mut values: [f64; UNIT_COUNT]) -> Self {
        for v in values.iter_mut() {
            *v = clamp_unit(*v);
        }
        ActivationVector(values)
    }

    /// Builds a vector from a sparse list, leaving unlisted units at 0.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, UnitError>
    where
        I: IntoIterator<Item = (ControlUnit, f64)>,
    {
        let mut values = [0.0; UNIT_COUNT];
        for (unit, value) in pairs {
            values[unit.index()] = value;
        }
        Self::new(values)
    }

    pub fn get(&self, unit: ControlUnit) -> f64 {
        self.0[unit.index()]
    }

    pub fn values(&self) -> &[f64; UNIT_COUNT] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = (ControlUnit, f64)> + '_ {
        ControlUnit::ALL.into_iter().zip(self.0.iter().copied())
    }

    pub fn is_neutral(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }
}

impl Default for ActivationVector {
    fn default() -> Self {
        Self::NEUTRAL
    }
}

#[allow(clippy::manual_clamp)]
fn clamp_unit(v: f64) -> f64 {
    // max/min rather than f64::clamp so NaN lands on 0
    v.max(0.0).min(1.0)
}

/// Clamps a raw per-unit map into a valid [`ActivationVector`].
///
/// The map must be dense over the inventory.
pub fn vector_clamp(raw: &BTreeMap<ControlUnit, f64>) -> Result<ActivationVector, UnitError> {
    let mut values = [0.0; UNIT_COUNT];
    for unit in ControlUnit::ALL {
        let v = raw.get(&unit).ok_or(UnitError::MissingUnit(unit))?;
        values[unit.index()] = *v;
    }
    Ok(ActivationVector::clamped(values))
}

/// A grid coordinate `(p, a)` with both components in `{-1, 0, +1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Corner {
    p: i8,
    a: i8,
}

impl Corner {
    /// All nine corners, ordered by arousal descending then pleasure ascending.
    pub const ALL: [Corner; 9] = [
        Corner { p: -1, a: 1 },
        Corner { p: 0, a: 1 },
        Corner { p: 1, a: 1 },
        Corner { p: -1, a: 0 },
        Corner { p: 0, a: 0 },
        Corner { p: 1, a: 0 },
        Corner { p: -1, a: -1 },
        Corner { p: 0, a: -1 },
        Corner { p: 1, a: -1 },
    ];

    pub const CENTER: Corner = Corner { p: 0, a: 0 };

    pub fn new(p: i8, a: i8) -> Option<Corner> {
        ((-1..=1).contains(&p) && (-1..=1).contains(&a)).then_some(Corner { p, a })
    }

    pub fn p(self) -> i8 {
        self.p
    }

    pub fn a(self) -> i8 {
        self.a
    }

    /// Position in [`Corner::ALL`].
    pub fn index(self) -> usize {
        ((1 - self.a) * 3 + (self.p + 1)) as usize
    }

    /// The `"p,a"` key used in grid files.
    pub fn key(self) -> String {
        alloc::format!("{},{}", self.p, self.a)
    }

    pub fn parse_key(key: &str) -> Option<Corner> {
        let (p, a) = key.split_once(',')?;
        Corner::new(p.trim().parse().ok()?, a.trim().parse().ok()?)
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.a)
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("missing corner {0}")]
    MissingCorner(Corner),
    #[error("pose {center} must be neutral but {unit} = {value:.6}", center = Corner::CENTER)]
    NonNeutralCenter { unit: ControlUnit, value: f64 },
}

/// The nine prototype expressions at the extremes and center of the PA square.
#[derive(Clone, Debug, PartialEq)]
pub struct CornerPoseGrid {
    name: String,
    version: i64,
    poses: [ActivationVector; 9],
}

impl CornerPoseGrid {
    /// Builds a grid; every corner must be present and `(0,0)` must be neutral.
    ///
    /// Values are snapped to 6 decimals, the precision of the grid file format.
    pub fn new(
        name: impl Into<String>,
        version: i64,
        poses: &BTreeMap<Corner, ActivationVector>,
    ) -> Result<Self, GridError> {
        let mut out = [ActivationVector::NEUTRAL; 9];
        for corner in Corner::ALL {
            let pose = poses.get(&corner).ok_or(GridError::MissingCorner(corner))?;
            out[corner.index()] = ActivationVector(pose.0.map(quantize));
        }
        if let Some((unit, value)) = out[Corner::CENTER.index()].iter().find(|&(_, v)| v != 0.0) {
            return Err(GridError::NonNeutralCenter { unit, value });
        }
        Ok(CornerPoseGrid {
            name: name.into(),
            version,
            poses: out,
        })
    }

    /// A grid where every corner is neutral.
    pub fn neutral(name: impl Into<String>) -> Self {
        CornerPoseGrid {
            name: name.into(),
            version: 1,
            poses: [ActivationVector::NEUTRAL; 9],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn version(&self) -> i64 {
        self.version
    }

    pub fn pose(&self, corner: Corner) -> &ActivationVector {
        &self.poses[corner.index()]
    }

    /// Corners paired with their poses, in [`Corner::ALL`] order.
    pub fn iter(&self) -> impl Iterator<Item = (Corner, &ActivationVector)> {
        Corner::ALL.into_iter().map(move |c| (c, self.pose(c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inventory_is_twenty_units_with_unique_names() {
        let mut names: Vec<_> = ControlUnit::ALL.iter().map(|u| u.name()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), UNIT_COUNT);
        for (i, u) in ControlUnit::ALL.iter().enumerate() {
            assert_eq!(u.index(), i);
            assert_eq!(ControlUnit::from_name(u.name()), Some(*u));
        }
    }

    #[test]
    fn region_counts() {
        let count = |r| ControlUnit::ALL.iter().filter(|u| u.region() == r).count();
        assert_eq!(count(Region::Upper), 6);
        assert_eq!(count(Region::Mid), 3);
        assert_eq!(count(Region::Lower), 11);
    }

    #[test]
    fn corner_index_matches_order() {
        for (i, c) in Corner::ALL.iter().enumerate() {
            assert_eq!(c.index(), i);
            assert_eq!(Corner::parse_key(&c.key()), Some(*c));
        }
        assert_eq!(Corner::new(2, 0), None);
    }

    #[test]
    fn clamp_examples() {
        let mut raw: BTreeMap<_, _> = ControlUnit::ALL.iter().map(|&u| (u, 0.5)).collect();
        assert!(vector_clamp(&raw)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 0.5));

        raw.insert(ControlUnit::JawDrop, 1.2);
        raw.insert(ControlUnit::LipsPart, -0.1);
        let v = vector_clamp(&raw).unwrap();
        assert_eq!(v.get(ControlUnit::JawDrop), 1.0);
        assert_eq!(v.get(ControlUnit::LipsPart), 0.0);

        raw.remove(&ControlUnit::ChinRaiser);
        assert_eq!(
            vector_clamp(&raw),
            Err(UnitError::MissingUnit(ControlUnit::ChinRaiser))
        );
    }

    #[test]
    fn clamp_maps_nan_to_zero() {
        let mut values = [0.3; UNIT_COUNT];
        values[4] = f64::NAN;
        assert_eq!(ActivationVector::clamped(values).values()[4], 0.0);
    }

    #[test]
    fn vector_rejects_out_of_range() {
        let mut values = [0.0; UNIT_COUNT];
        values[2] = 1.5;
        assert!(matches!(
            ActivationVector::new(values),
            Err(UnitError::OutOfRange {
                unit: ControlUnit::BrowLowerer,
                ..
            })
        ));
        values[2] = f64::NAN;
        assert!(ActivationVector::new(values).is_err());
    }

    #[test]
    fn grid_requires_all_corners_and_neutral_center() {
        let mut poses: BTreeMap<_, _> = Corner::ALL
            .iter()
            .map(|&c| (c, ActivationVector::NEUTRAL))
            .collect();
        assert!(CornerPoseGrid::new("g", 1, &poses)
            .unwrap()
            .iter()
            .all(|(_, v)| v.is_neutral()));

        let center = ActivationVector::from_pairs([(ControlUnit::InnerBrowRaiser, 0.3)]).unwrap();
        poses.insert(Corner::CENTER, center);
        assert_eq!(
            CornerPoseGrid::new("g", 1, &poses),
            Err(GridError::NonNeutralCenter {
                unit: ControlUnit::InnerBrowRaiser,
                value: 0.3
            })
        );

        poses.insert(Corner::CENTER, ActivationVector::NEUTRAL);
        poses.remove(&Corner::new(1, -1).unwrap());
        let err = CornerPoseGrid::new("g", 1, &poses).unwrap_err();
        assert_eq!(err.to_string(), "missing corner (1,-1)");
    }
}
