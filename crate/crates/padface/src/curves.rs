//! Curve export.
//!
//! JSON: `{"fps": 30.000000, "units": [...], "frames": [[...], ...]}`, one
//! frame per line. CSV: a `time,<unit>,...` header and one row per frame.
//! Every number is written with 6 decimals, so equal curves export to equal
//! bytes.

use std::fmt::Write;

use padface_core::{ControlUnit, Fixed6, SampledCurve};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CurveFormat {
    #[default]
    Json,
    Csv,
}

impl CurveFormat {
    pub fn name(self) -> &'static str {
        match self {
            CurveFormat::Json => "json",
            CurveFormat::Csv => "csv",
        }
    }

    pub fn from_name(name: &str) -> Option<CurveFormat> {
        match name {
            "json" => Some(CurveFormat::Json),
            "csv" => Some(CurveFormat::Csv),
            _ => None,
        }
    }

    pub fn content_type(self) -> &'static str {
        match self {
            CurveFormat::Json => "application/json",
            CurveFormat::Csv => "text/csv",
        }
    }
}

pub fn export_curves(curve: &SampledCurve, format: CurveFormat) -> String {
    match format {
        CurveFormat::Json => to_json(curve),
        CurveFormat::Csv => to_csv(curve),
    }
}

fn row(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| Fixed6(*v).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn to_json(curve: &SampledCurve) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"fps\": {},", Fixed6(curve.fps()));
    let units: Vec<String> = ControlUnit::ALL
        .iter()
        .map(|u| format!("\"{}\"", u.name()))
        .collect();
    let _ = writeln!(out, "  \"units\": [{}],", units.join(","));
    if curve.is_empty() {
        out.push_str("  \"frames\": []\n");
    } else {
        out.push_str("  \"frames\": [\n");
        let last = curve.len() - 1;
        for (i, frame) in curve.frames().iter().enumerate() {
            let sep = if i < last { "," } else { "" };
            let _ = writeln!(out, "    [{}]{sep}", row(frame.values()));
        }
        out.push_str("  ]\n");
    }
    out.push_str("}\n");
    out
}

fn to_csv(curve: &SampledCurve) -> String {
    let mut out = String::from("time");
    for unit in ControlUnit::ALL {
        out.push(',');
        out.push_str(unit.name());
    }
    out.push('\n');
    for (i, frame) in curve.frames().iter().enumerate() {
        let _ = writeln!(out, "{},{}", Fixed6(curve.time(i)), row(frame.values()));
    }
    out
}
