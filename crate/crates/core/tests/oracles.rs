//! Independent reference implementations checked against the library.

use std::collections::BTreeMap;

use padface_core::emotion::{interpolate_in_cell, Cell};
use padface_core::reference::AnnotatedSample;
use padface_core::units::UNIT_COUNT;
use padface_core::{
    knn_pick, pa_distance, pa_to_pose, parse_annotation, sample_timeline, serialize_annotation,
    ActivationVector, Corner, CornerPoseGrid, Dataset, LayerPolicy, MappingMode, PleasureArousal,
    PoseLexicon,
};
use proptest::prelude::*;

fn grid_strategy() -> impl Strategy<Value = CornerPoseGrid> {
    proptest::collection::vec(proptest::array::uniform20(0.0f64..=1.0), 8).prop_map(|poses| {
        let mut map = BTreeMap::new();
        let mut it = poses.into_iter();
        for corner in Corner::ALL {
            let v = if corner == Corner::CENTER {
                ActivationVector::NEUTRAL
            } else {
                ActivationVector::new(it.next().unwrap()).unwrap()
            };
            map.insert(corner, v);
        }
        CornerPoseGrid::new("random", 1, &map).unwrap()
    })
}

fn pa_strategy() -> impl Strategy<Value = PleasureArousal> {
    (-1.0f64..=1.0, -1.0f64..=1.0).prop_map(|(p, a)| PleasureArousal::new(p, a).unwrap())
}

/// Nearest of {-1, 0, 1}; exact halves go away from zero.
fn nearest_level(x: f64) -> i8 {
    if x >= 0.5 {
        1
    } else if x <= -0.5 {
        -1
    } else {
        0
    }
}

/// Plain bilinear blend over the cell, written from the textbook formula.
fn bilinear_oracle(grid: &CornerPoseGrid, pa: PleasureArousal) -> [f64; UNIT_COUNT] {
    let p0: i8 = if pa.p() < 0.0 { -1 } else { 0 };
    let a0: i8 = if pa.a() < 0.0 { -1 } else { 0 };
    let u = pa.p() - f64::from(p0);
    let v = pa.a() - f64::from(a0);
    let at = |dp: i8, da: i8| grid.pose(Corner::new(p0 + dp, a0 + da).unwrap()).values();
    let mut out = [0.0; UNIT_COUNT];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = (1.0 - u) * (1.0 - v) * at(0, 0)[i]
            + u * (1.0 - v) * at(1, 0)[i]
            + (1.0 - u) * v * at(0, 1)[i]
            + u * v * at(1, 1)[i];
    }
    out
}

proptest! {
    #[test]
    fn discrete_mode_matches_per_axis_rounding(grid in grid_strategy(), pa in pa_strategy()) {
        let expected = Corner::new(nearest_level(pa.p()), nearest_level(pa.a())).unwrap();
        prop_assert_eq!(pa_to_pose(pa, &grid, MappingMode::Discrete), *grid.pose(expected));
    }

    #[test]
    fn continuous_mode_matches_textbook_bilinear(grid in grid_strategy(), pa in pa_strategy()) {
        let got = pa_to_pose(pa, &grid, MappingMode::Continuous);
        for (g, e) in got.values().iter().zip(bilinear_oracle(&grid, pa)) {
            prop_assert!((g - e).abs() <= 1e-12, "{} vs {}", g, e);
        }
    }

    #[test]
    fn shared_cell_edges_agree(grid in grid_strategy(), t in -1.0f64..=1.0) {
        // the line p = 0 belongs to the right-hand cells; the left-hand cells
        // must meet them there
        let pa = PleasureArousal::new(0.0, t).unwrap();
        let a_lo = if t < 0.0 { -1 } else { 0 };
        let left = Cell::ALL.into_iter().find(|c| c.corners()[0] == Corner::new(-1, a_lo).unwrap()).unwrap();
        let right = Cell::containing(pa);
        let l = interpolate_in_cell(&grid, left, pa);
        let r = interpolate_in_cell(&grid, right, pa);
        for (x, y) in l.values().iter().zip(r.values()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn knn_matches_full_sort(
        rows in proptest::collection::vec((-4i8..=4, -4i8..=4), 1..120),
        target in pa_strategy(),
        k in 1usize..15,
    ) {
        // coarse coordinates force many exact ties
        let samples: Vec<AnnotatedSample> = rows
            .iter()
            .enumerate()
            .map(|(i, &(p, a))| AnnotatedSample {
                id: format!("s{i}"),
                pa: PleasureArousal::new(f64::from(p) / 4.0, f64::from(a) / 4.0).unwrap(),
            })
            .collect();
        let d = Dataset::new("t", samples.clone()).unwrap();
        let mut oracle: Vec<(f64, usize)> = samples
            .iter()
            .enumerate()
            .map(|(i, s)| (pa_distance(s.pa, target), i))
            .collect();
        oracle.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        oracle.truncate(k);
        let got: Vec<(f64, usize)> = knn_pick(&d, target, k)
            .unwrap()
            .into_iter()
            .map(|n| (n.distance, n.index))
            .collect();
        prop_assert_eq!(got, oracle);
    }

    #[test]
    fn permuting_rows_only_reorders_ties(
        rows in proptest::collection::vec((-4i8..=4, -4i8..=4), 1..60),
        target in pa_strategy(),
        k in 1usize..10,
    ) {
        let samples: Vec<AnnotatedSample> = rows
            .iter()
            .enumerate()
            .map(|(i, &(p, a))| AnnotatedSample {
                id: format!("s{i}"),
                pa: PleasureArousal::new(f64::from(p) / 4.0, f64::from(a) / 4.0).unwrap(),
            })
            .collect();
        let mut reversed = samples.clone();
        reversed.reverse();
        let forward = knn_pick(&Dataset::new("f", samples).unwrap(), target, k).unwrap();
        let backward = knn_pick(&Dataset::new("b", reversed).unwrap(), target, k).unwrap();
        let dists = |v: &[padface_core::Neighbor]| v.iter().map(|n| n.distance).collect::<Vec<_>>();
        prop_assert_eq!(dists(&forward), dists(&backward));
        prop_assert!(forward.windows(2).all(|w| w[0].distance <= w[1].distance));
    }
}

fn timeline_text() -> impl Strategy<Value = String> {
    let emotion = (0u32..40, 1u32..20, -100i32..=100, -100i32..=100, 0u32..10);
    (
        20u32..60,
        proptest::collection::vec(emotion, 0..6),
        any::<bool>(),
    )
        .prop_map(|(dur, spans, with_mouth)| {
            let duration = f64::from(dur) / 10.0;
            let mut text = format!("duration {duration}\n");
            let mut cursor = 0.0f64;
            for (gap, len, p, a, att) in spans {
                let start = cursor + f64::from(gap) / 100.0;
                let end = start + f64::from(len) / 10.0;
                if end > duration {
                    break;
                }
                text.push_str(&format!(
                    "emotion {start:.2} {end:.2} p={} a={} attack={}\n",
                    f64::from(p) / 100.0,
                    f64::from(a) / 100.0,
                    f64::from(att) / 20.0
                ));
                cursor = end;
            }
            if with_mouth && duration >= 1.0 {
                text.push_str("mouthing 0.2 0.9 pah w=0.7\n");
            }
            text
        })
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(text in timeline_text()) {
        let t = parse_annotation(&text).unwrap();
        let canonical = serialize_annotation(&t);
        let again = parse_annotation(&canonical).unwrap();
        prop_assert_eq!(&again, &t);
        prop_assert_eq!(serialize_annotation(&again), canonical);
    }

    #[test]
    fn sampled_values_stay_in_unit_range(text in timeline_text(), grid in grid_strategy()) {
        let t = parse_annotation(&text).unwrap();
        let mut lexicon = PoseLexicon::new();
        lexicon
            .insert("pah", &[(padface_core::ControlUnit::JawDrop, 1.0)])
            .unwrap();
        let curve = sample_timeline(&t, &grid, &lexicon, &LayerPolicy::default(), 30.0, MappingMode::Continuous)
            .unwrap();
        for frame in curve.frames() {
            prop_assert!(frame.values().iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
