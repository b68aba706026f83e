//! JSON reports for the reference picker.
//!
//! Distances are written with 6 decimals. The corners report lists corners
//! in target order (arousal descending, then pleasure ascending) and counts
//! how many distinct samples the lists share, since a sample can be close to
//! more than one corner.

use std::collections::BTreeSet;
use std::fmt::Write;

use padface_core::{Corner, Fixed6, Neighbor, PleasureArousal};

use crate::json_string;

fn neighbor_list(out: &mut String, neighbors: &[Neighbor], indent: &str) {
    if neighbors.is_empty() {
        out.push_str("[]");
        return;
    }
    out.push_str("[\n");
    for (i, n) in neighbors.iter().enumerate() {
        let sep = if i + 1 < neighbors.len() { "," } else { "" };
        let _ = writeln!(
            out,
            "{indent}  {{\"id\": {}, \"distance\": {}}}{sep}",
            json_string(&n.id),
            Fixed6(n.distance)
        );
    }
    out.push_str(indent);
    out.push(']');
}

pub fn target_report(target: PleasureArousal, k: usize, neighbors: &[Neighbor]) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(
        out,
        "  \"target\": [{}, {}],",
        Fixed6(target.p()),
        Fixed6(target.a())
    );
    let _ = writeln!(out, "  \"k\": {k},");
    out.push_str("  \"neighbors\": ");
    neighbor_list(&mut out, neighbors, "  ");
    out.push_str("\n}\n");
    out
}

pub fn corners_report(k: usize, sets: &[(Corner, Vec<Neighbor>)]) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"k\": {k},");
    out.push_str("  \"corners\": {\n");
    for (i, (corner, neighbors)) in sets.iter().enumerate() {
        let _ = write!(out, "    \"{}\": ", corner.key());
        neighbor_list(&mut out, neighbors, "    ");
        out.push_str(if i + 1 < sets.len() { ",\n" } else { "\n" });
    }
    out.push_str("  },\n");
    let total: usize = sets.iter().map(|(_, n)| n.len()).sum();
    let unique: BTreeSet<usize> = sets
        .iter()
        .flat_map(|(_, n)| n.iter().map(|x| x.index))
        .collect();
    let _ = writeln!(out, "  \"total\": {total},");
    let _ = writeln!(out, "  \"unique\": {}", unique.len());
    out.push_str("}\n");
    out
}
