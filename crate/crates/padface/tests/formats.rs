use std::collections::BTreeMap;
use std::path::Path;

use padface::curves::{export_curves, CurveFormat};
use padface::dataset::load_dataset;
use padface::grid_file::{load_grid, save_grid};
use padface_core::{
    parse_annotation, serialize_annotation, ActivationVector, Corner, CornerPoseGrid, SampledCurve,
};
use proptest::prelude::*;

fn grid_strategy() -> impl Strategy<Value = CornerPoseGrid> {
    (
        proptest::collection::vec(proptest::array::uniform20(0.0f64..=1.0), 8),
        "[a-z]{1,8}",
        0i64..100,
    )
        .prop_map(|(poses, name, version)| {
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
            CornerPoseGrid::new(name, version, &map).unwrap()
        })
}

proptest! {
    #[test]
    fn grid_json_round_trip_is_exact(grid in grid_strategy()) {
        let text = save_grid(&grid);
        let loaded = load_grid(text.as_bytes()).unwrap();
        prop_assert_eq!(&loaded, &grid);
        prop_assert_eq!(save_grid(&loaded), text);
    }

    #[test]
    fn curve_export_parses_back_to_the_rounded_values(
        frames in proptest::collection::vec(proptest::array::uniform20(0.0f64..=1.0), 1..10),
    ) {
        let curve = SampledCurve::new(
            24.0,
            frames.iter().map(|f| ActivationVector::new(*f).unwrap()).collect(),
        );
        let json: serde_json::Value =
            serde_json::from_str(&export_curves(&curve, CurveFormat::Json)).unwrap();
        let csv = export_curves(&curve, CurveFormat::Csv);
        for (i, frame) in frames.iter().enumerate() {
            let row: Vec<&str> = csv.lines().nth(i + 1).unwrap().split(',').collect();
            for (j, x) in frame.iter().enumerate() {
                let from_json = json["frames"][i][j].as_f64().unwrap();
                let from_csv: f64 = row[j + 1].parse().unwrap();
                prop_assert!((from_json - x).abs() <= 5e-7);
                prop_assert_eq!(from_json, from_csv);
            }
        }
    }

    #[test]
    fn dataset_rows_keep_file_order(
        rows in proptest::collection::vec((-1000i32..=1000, -1000i32..=1000), 0..50),
    ) {
        let mut text = String::from("id,pleasure,arousal\n");
        for (i, (p, a)) in rows.iter().enumerate() {
            text.push_str(&format!("r{i},{},{}\n", f64::from(*p) / 1000.0, f64::from(*a) / 1000.0));
        }
        let d = load_dataset("t", text.as_bytes()).unwrap();
        prop_assert_eq!(d.len(), rows.len());
        for (i, (s, (p, a))) in d.samples().iter().zip(&rows).enumerate() {
            prop_assert_eq!(&s.id, &format!("r{i}"));
            prop_assert_eq!(s.pa.p(), f64::from(*p) / 1000.0);
            prop_assert_eq!(s.pa.a(), f64::from(*a) / 1000.0);
        }
    }
}

#[test]
fn corpus_is_a_serialization_fixpoint() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    for name in [
        "greeting.nms",
        "repeat_request.nms",
        "apology.nms",
        "wait.nms",
        "farewell.nms",
    ] {
        let text = std::fs::read_to_string(dir.join(name)).unwrap();
        let t = parse_annotation(&text).unwrap();
        let canonical = serialize_annotation(&t);
        let again = parse_annotation(&canonical).unwrap();
        assert_eq!(again, t, "{name}");
        assert_eq!(serialize_annotation(&again), canonical, "{name}");
    }
}
