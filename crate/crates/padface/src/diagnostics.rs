//! Rendering of diagnostics for terminals, tools and HTTP clients.

use padface_core::Diagnostic;
use serde_json::{json, Value};

/// `severity: file:line:col: Kind: message` (the position is omitted when
/// unknown).
pub fn render(file: &str, d: &Diagnostic) -> String {
    match d.pos {
        Some(pos) => format!(
            "{}: {file}:{}:{}: {}: {}",
            d.severity.name(),
            pos.line,
            pos.col,
            d.kind,
            d.message
        ),
        None => format!("{}: {file}: {}: {}", d.severity.name(), d.kind, d.message),
    }
}

/// One JSON object per diagnostic, for `--json-diagnostics`.
pub fn render_json(file: &str, d: &Diagnostic) -> String {
    json!({
        "severity": d.severity.name(),
        "kind": d.kind,
        "message": d.message,
        "file": file,
        "line": d.pos.map(|p| p.line),
        "col": d.pos.map(|p| p.col),
    })
    .to_string()
}

/// `{"error": {"kind", "message", "line", "col"}}` body for API errors.
pub fn error_body(d: &Diagnostic) -> Value {
    error_value(d.kind, &d.message, d.pos.map(|p| (p.line, p.col)))
}

pub fn error_value(kind: &str, message: &str, pos: Option<(u32, u32)>) -> Value {
    json!({
        "error": {
            "kind": kind,
            "message": message,
            "line": pos.map(|p| p.0),
            "col": pos.map(|p| p.1),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use padface_core::notation::SourcePos;

    #[test]
    fn text_and_json_forms() {
        let d = Diagnostic::error(
            "OverlapError",
            "spans overlap".into(),
            Some(SourcePos { line: 3, col: 1 }),
        );
        assert_eq!(
            render("a.nms", &d),
            "error: a.nms:3:1: OverlapError: spans overlap"
        );
        let v: Value = serde_json::from_str(&render_json("a.nms", &d)).unwrap();
        assert_eq!(v["line"], 3);
        assert_eq!(v["kind"], "OverlapError");

        let w = Diagnostic::warning("EnvelopeWarning", "short".into(), None);
        assert_eq!(
            render("a.nms", &w),
            "warning: a.nms: EnvelopeWarning: short"
        );
        assert_eq!(error_body(&w)["error"]["line"], Value::Null);
    }
}
