//! Pleasure/arousal values and their mapping onto the corner-pose grid.
//!
//! Two mapping modes are offered. [`MappingMode::Discrete`] snaps each axis to
//! `{-1, 0, +1}` (rounding half away from zero) and returns the stored corner
//! pose. [`MappingMode::Continuous`] interpolates bilinearly inside whichever
//! of the four unit cells of the 3×3 grid contains the point, so corners are
//! reproduced exactly and no unit ever leaves the hull of its cell's corners.

use core::fmt;

use crate::units::{ActivationVector, Corner, CornerPoseGrid, UNIT_COUNT};

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum EmotionError {
    #[error("pleasure/arousal ({p}, {a}) is outside [-1, 1]")]
    OutOfRange { p: f64, a: f64 },
}

/// What to do with (p, a) values outside the unit square.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strictness {
    /// Reject with [`EmotionError::OutOfRange`].
    #[default]
    Strict,
    /// Clamp into the square and report that clamping happened.
    Lenient,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MappingMode {
    Discrete,
    #[default]
    Continuous,
}

impl MappingMode {
    pub fn name(self) -> &'static str {
        match self {
            MappingMode::Discrete => "discrete",
            MappingMode::Continuous => "continuous",
        }
    }

    pub fn from_name(name: &str) -> Option<MappingMode> {
        match name {
            "discrete" => Some(MappingMode::Discrete),
            "continuous" => Some(MappingMode::Continuous),
            _ => None,
        }
    }
}

/// A point in the pleasure/arousal square `[-1, 1]²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PleasureArousal {
    p: f64,
    a: f64,
}

impl PleasureArousal {
    pub const NEUTRAL: PleasureArousal = PleasureArousal { p: 0.0, a: 0.0 };

    pub fn new(p: f64, a: f64) -> Result<Self, EmotionError> {
        let in_range = |x: f64| (-1.0..=1.0).contains(&x);
        if in_range(p) && in_range(a) {
            // + 0.0 folds -0.0 into 0.0
            Ok(PleasureArousal {
                p: p + 0.0,
                a: a + 0.0,
            })
        } else {
            Err(EmotionError::OutOfRange { p, a })
        }
    }

    /// Applies `strictness` to a raw pair. The flag is true when the lenient
    /// policy had to clamp. NaN is rejected in either mode.
    pub fn resolve(p: f64, a: f64, strictness: Strictness) -> Result<(Self, bool), EmotionError> {
        match Self::new(p, a) {
            Ok(pa) => Ok((pa, false)),
            Err(err) if strictness == Strictness::Strict || p.is_nan() || a.is_nan() => Err(err),
            Err(_) => Ok((Self::new(p.clamp(-1.0, 1.0), a.clamp(-1.0, 1.0))?, true)),
        }
    }

    pub fn p(self) -> f64 {
        self.p
    }

    pub fn a(self) -> f64 {
        self.a
    }

    /// The corner selected by discrete mode.
    pub fn nearest_corner(self) -> Corner {
        let snap = |x: f64| libm::round(x) as i8;
        Corner::new(snap(self.p), snap(self.a)).expect("in-range values round into {-1, 0, 1}")
    }
}

impl From<Corner> for PleasureArousal {
    fn from(c: Corner) -> Self {
        PleasureArousal {
            p: f64::from(c.p()),
            a: f64::from(c.a()),
        }
    }
}

impl fmt::Display for PleasureArousal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.a)
    }
}

/// The nine grid targets, arousal descending then pleasure ascending.
pub fn corner_targets() -> [PleasureArousal; 9] {
    Corner::ALL.map(PleasureArousal::from)
}

/// One of the four unit cells of the 3×3 grid, identified by its low corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    p_lo: i8,
    a_lo: i8,
}

impl Cell {
    pub const ALL: [Cell; 4] = [
        Cell { p_lo: -1, a_lo: -1 },
        Cell { p_lo: 0, a_lo: -1 },
        Cell { p_lo: -1, a_lo: 0 },
        Cell { p_lo: 0, a_lo: 0 },
    ];

    /// The cell used for `pa`. Points on an interior edge belong to the upper cell.
    pub fn containing(pa: PleasureArousal) -> Cell {
        let lo = |x: f64| if x < 0.0 { -1 } else { 0 };
        Cell {
            p_lo: lo(pa.p),
            a_lo: lo(pa.a),
        }
    }

    /// Corners as `[(p0,a0), (p1,a0), (p0,a1), (p1,a1)]`.
    pub fn corners(self) -> [Corner; 4] {
        let c = |p, a| Corner::new(p, a).expect("cell corners lie on the grid");
        let (p0, a0) = (self.p_lo, self.a_lo);
        [c(p0, a0), c(p0 + 1, a0), c(p0, a0 + 1), c(p0 + 1, a0 + 1)]
    }

    /// Bilinear weights for `pa`, aligned with [`Cell::corners`]. Cells have
    /// unit width so the local coordinates are plain offsets.
    pub fn weights(self, pa: PleasureArousal) -> [f64; 4] {
        let s = pa.p - f64::from(self.p_lo);
        let t = pa.a - f64::from(self.a_lo);
        [(1.0 - s) * (1.0 - t), s * (1.0 - t), (1.0 - s) * t, s * t]
    }
}

/// Bilinear interpolation of `grid` inside `cell`.
///
/// Each unit is kept inside the min/max of the cell's four corner values so
/// floating-point rounding can never push it outside the hull.
pub fn interpolate_in_cell(
    grid: &CornerPoseGrid,
    cell: Cell,
    pa: PleasureArousal,
) -> ActivationVector {
    let weights = cell.weights(pa);
    let poses = cell.corners().map(|c| grid.pose(c).values());
    let mut out = [0.0; UNIT_COUNT];
    for (u, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (w, pose) in weights.iter().zip(poses.iter()) {
            acc += w * pose[u];
            lo = lo.min(pose[u]);
            hi = hi.max(pose[u]);
        }
        *slot = acc.max(lo).min(hi);
    }
    ActivationVector::new(out).expect("convex combination of valid poses stays in [0, 1]")
}

/// Maps a pleasure/arousal point to a face pose.
pub fn pa_to_pose(
    pa: PleasureArousal,
    grid: &CornerPoseGrid,
    mode: MappingMode,
) -> ActivationVector {
    match mode {
        MappingMode::Discrete => *grid.pose(pa.nearest_corner()),
        MappingMode::Continuous => interpolate_in_cell(grid, Cell::containing(pa), pa),
    }
}

/// Euclidean distance in the PA plane.
pub fn pa_distance(x: PleasureArousal, y: PleasureArousal) -> f64 {
    let dp = x.p - y.p;
    let da = x.a - y.a;
    libm::sqrt(dp * dp + da * da)
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn any_pa() -> impl Strategy<Value = PleasureArousal> {
        (-1.0f64..=1.0, -1.0f64..=1.0).prop_map(|(p, a)| PleasureArousal::new(p, a).unwrap())
    }

    proptest! {
        #[test]
        fn weights_partition_unity(x in any_pa()) {
            let w = Cell::containing(x).weights(x);
            prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(w.iter().all(|&wi| wi >= 0.0));
        }

        #[test]
        fn distance_is_symmetric_and_triangular(x in any_pa(), y in any_pa(), z in any_pa()) {
            prop_assert_eq!(pa_distance(x, y), pa_distance(y, x));
            prop_assert!(pa_distance(x, z) <= pa_distance(x, y) + pa_distance(y, z) + 1e-12);
        }
    }
}
